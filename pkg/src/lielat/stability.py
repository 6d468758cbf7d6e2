"""Automorphism checks, the determinant criterion and index-stability verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import BasisMismatch, InternalError, InvalidInput, InvalidIso, NotAnAutomorphism
from .lattice import LieLattice, derivations, is_semisimple, killing_matrix
from .padic import INF, QMatrix, as_qmatrix, newton_slopes, vp_fast
from .sublattice import Sublattice, index, is_subalgebra

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class AutoMap:
    S: QMatrix
    verified: bool
    det_valuation: object  # int, or INF when S is singular


def automorphism_check(L: LieLattice, S) -> AutoMap:
    """Is ``S`` an automorphism of the Q_p-algebra L ⊗ Q_p?"""
    S = as_qmatrix(S)
    if S.shape != (L.dim, L.dim):
        raise InvalidInput(f"map must be {L.dim}x{L.dim}, got {S.shape}")
    det = S.det()
    if det == 0:
        return AutoMap(S, False, INF)
    cols = S.columns()
    ok = all(
        S @ L.basis_bracket(i, j) == L.bracket(cols[i], cols[j])
        for i, j in combinations(range(L.dim), 2)
    )
    return AutoMap(S, ok, vp_fast(det, L.p))


@dataclass(frozen=True)
class SerreVerdict:
    det_valuation: int
    norm_det: Fraction
    passes: bool
    eigen_valuations: tuple[Fraction, ...]


def serre_verdict(L: LieLattice, s: AutoMap) -> SerreVerdict:
    if not s.verified:
        raise NotAnAutomorphism("map is not a verified automorphism")
    v = s.det_valuation
    slopes = newton_slopes(s.S.charpoly(), L.p)
    if sum(slopes) != v:
        raise InternalError("eigenvalue valuations do not add up to vp(det)")
    return SerreVerdict(v, Fraction(L.p) ** (-v), v == 0, tuple(slopes))


@dataclass(frozen=True)
class IsoIndexReport:
    index_m: int
    index_n: int
    equal: bool
    semisimple: bool
    gram_identity: bool | None
    image_basis: QMatrix


def _image(L: LieLattice, M: Sublattice, N: Sublattice, phi) -> QMatrix:
    phi = as_qmatrix(phi)
    if phi.shape != (L.dim, L.dim):
        raise InvalidInput(f"map must be {L.dim}x{L.dim}")
    if M.parent != L or N.parent != L:
        raise InvalidInput("sublattices belong to a different lattice")
    if not is_subalgebra(M):
        raise InvalidIso("source is not a subalgebra")
    if not automorphism_check(L, phi).verified:
        raise InvalidIso("map does not preserve brackets or is singular")
    C = phi @ M.B
    if not C.is_p_integral(L.p) or Sublattice(L, C) != N:
        raise BasisMismatch("image of the source basis does not span the target")
    return C


def iso_index_check(L: LieLattice, M: Sublattice, N: Sublattice, phi) -> IsoIndexReport:
    """Compare indices of M and N = phi(M), checking the Gram identity when it applies."""
    C = _image(L, M, N, phi)
    im, in_ = index(M), index(N)
    ss = is_semisimple(L).semisimple
    gram_ok = None
    if ss:
        A = killing_matrix(L).A
        gram_ok = M.B.T @ A @ M.B == C.T @ A @ C
        if not gram_ok:
            raise InternalError("Killing form not preserved by a verified isomorphism")
        if im != in_:
            raise InternalError("semisimple lattice with unequal indices of isomorphic subalgebras")
    return IsoIndexReport(im, in_, im == in_, ss, gram_ok, C)


@dataclass(frozen=True)
class IndexRatio:
    numerator_exponent: int
    denominator_exponent: int
    ratio_valuation: int


def index_ratio(L: LieLattice, M: Sublattice, N: Sublattice, phi) -> IndexRatio:
    """[L:M] / [L:N] as a power of p."""
    rep = iso_index_check(L, M, N, phi)
    return IndexRatio(rep.index_m, rep.index_n, rep.index_m - rep.index_n)


def _weight_vectors(d: int, total: int) -> Iterator[tuple[int, ...]]:
    # lexicographically descending
    if d == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _weight_vectors(d - 1, total - first):
            yield (first,) + rest


def _homogeneous(L: LieLattice, w: Sequence[int]) -> bool:
    return all(
        w[i] + w[j] == w[k]
        for (i, j), c in L.brackets.items() for k in range(L.dim) if c[k]
    )


def witness_candidates(L: LieLattice, max_weight: int | None = None) -> Iterator[tuple[str, QMatrix]]:
    """Deterministic candidate order for instability witnesses.

    First p·I, then the diagonal scalings diag(p^w_0, ..., p^w_{d-1}) by
    increasing total weight, lexicographically descending within a weight.
    Only weight vectors compatible with the grading (w_i + w_j = w_k whenever
    [a_i, a_j] involves a_k) are yielded, since those are exactly the
    diagonal automorphisms.
    """
    p, d = L.p, L.dim
    yield "scalar", QMatrix.identity(d) * p
    max_weight = 2 * d if max_weight is None else max_weight
    for total in range(1, max_weight + 1):
        for w in _weight_vectors(d, total):
            if all(x == 1 for x in w):
                continue
            if _homogeneous(L, w):
                yield "graded", QMatrix.diag(*(p**x for x in w))


@dataclass(frozen=True)
class WitnessSearch:
    witness: AutoMap | None
    strategy: str | None
    examined: int


def search_unstable_witness(
    L: LieLattice,
    budget: int = DEFAULT_BUDGET,
    candidates: Iterable = (),
) -> WitnessSearch:
    """First verified automorphism with vp(det) != 0 in the documented order.

    ``budget`` caps the number of candidate maps put through
    ``automorphism_check``; user ``candidates`` come last.
    """
    semisimple = is_semisimple(L).semisimple
    sources = list(witness_candidates(L))
    sources += [("user", as_qmatrix(c)) for c in candidates]
    examined = 0
    for strategy, S in sources:
        if examined >= budget:
            break
        examined += 1
        auto = automorphism_check(L, S)
        if not auto.verified:
            continue
        if semisimple and abs(S.det()) != 1:
            raise InternalError(f"automorphism of a semisimple lattice with det {S.det()}")
        if auto.det_valuation != 0:
            return WitnessSearch(auto, strategy, examined)
    return WitnessSearch(None, None, examined)


@dataclass(frozen=True)
class StabilityVerdict:
    status: str  # "Stable" | "Unstable" | "Unknown"
    certificate: dict = field(default_factory=dict)
    witness: AutoMap | None = None
    notes: str = ""


def stability_certificate(
    L: LieLattice,
    budget: int = DEFAULT_BUDGET,
    candidates: Iterable = (),
) -> StabilityVerdict:
    ss = is_semisimple(L)
    if ss.semisimple:
        return StabilityVerdict(
            "Stable",
            {"kind": "semisimple", "det_killing": ss.detA, "vp_det_killing": ss.vp_detA},
            notes="non-degenerate Killing form; every automorphism has det ±1",
        )
    der = derivations(L)
    if der.nilpotent:
        return StabilityVerdict(
            "Stable",
            {"kind": "der_nilpotent", "chain_length": der.chain_length, "der_dim": der.dim},
            notes="all derivations nilpotent; automorphism eigenvalues are roots of unity",
        )
    found = search_unstable_witness(L, budget, candidates)
    if found.witness is not None:
        return StabilityVerdict(
            "Unstable",
            {"kind": "witness", "strategy": found.strategy,
             "det_valuation": found.witness.det_valuation},
            witness=found.witness,
            notes="automorphism with |det| != 1 moves a sublattice to one of different index",
        )
    return StabilityVerdict(
        "Unknown", {}, notes=f"no certificate and no witness among {found.examined} candidates",
    )
