"""Z_p-Lie lattices given by structure constants, and their invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import InvalidInput, NotALattice, NotALieAlgebra
from .padic import (
    INF,
    QMatrix,
    Vector,
    check_prime,
    row_space_basis,
    nullspace,
    to_fraction,
    vp,
    vp_fast,
)

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LieLattice:
    """A rank-``dim`` lattice with bracket [a_i, a_j] = sum_k c(i,j,k) a_k.

    ``brackets`` maps pairs ``(i, j)`` with ``i < j`` to coefficient tuples;
    missing pairs bracket to zero.  Antisymmetry is built in.
    """

    name: str
    p: int
    dim: int
    brackets: Mapping[tuple[int, int], Vector]
    labels: tuple[str, ...] | None = None
    _table: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        check_prime(self.p)
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InvalidInput("dimension must be a positive integer")
        clean = {}
        for (i, j), coeffs in self.brackets.items():
            if not (0 <= i < j < self.dim):
                raise InvalidInput(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < dim")
            coeffs = tuple(to_fraction(c) for c in coeffs)
            if len(coeffs) != self.dim:
                raise InvalidInput(f"bracket ({i}, {j}) needs {self.dim} coefficients")
            if any(coeffs):
                clean[(i, j)] = coeffs
        object.__setattr__(self, "brackets", dict(sorted(clean.items())))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.dim:
                raise InvalidInput("one label per basis vector")
            object.__setattr__(self, "labels", labels)
        zero = (_ZERO,) * self.dim
        table = [[zero] * self.dim for _ in range(self.dim)]
        for (i, j), c in self.brackets.items():
            table[i][j] = c
            table[j][i] = tuple(-x for x in c)
        object.__setattr__(self, "_table", tuple(tuple(r) for r in table))

    def __hash__(self):
        return hash((self.name, self.p, self.dim, tuple(self.brackets.items())))

    def basis_bracket(self, i: int, j: int) -> Vector:
        return self._table[i][j]

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self._table[i][j][k]

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        d = self.dim
        if len(x) != d or len(y) != d:
            raise InvalidInput("coordinate vector has the wrong length")
        out = [_ZERO] * d
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self._table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = row[j]
                f = xi * yj
                for k in range(d):
                    if c[k]:
                        out[k] += f * c[k]
        return tuple(out)

    def with_p(self, p: int) -> LieLattice:
        return LieLattice(self.name, p, self.dim, self.brackets, self.labels)

    def in_basis(self, columns: QMatrix, name: str | None = None) -> LieLattice:
        """The same Q_p-algebra written in the basis given by ``columns``."""
        inv = columns.inverse()
        cols = columns.columns()
        br = {}
        for i, j in combinations(range(self.dim), 2):
            br[(i, j)] = inv @ self.bracket(cols[i], cols[j])
        return LieLattice(name or self.name, self.p, self.dim, br, self.labels)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"a{i}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    error: str | None = None
    where: tuple | None = None
    message: str = ""

    def raise_for_error(self):
        if self.ok:
            return
        if self.error == NotALattice.code:
            raise NotALattice(self.message, where=self.where)
        raise NotALieAlgebra(self.message, where=self.where)


def jacobiator(L: LieLattice, i: int, j: int, k: int) -> Vector:
    e = _unit_vectors(L.dim)
    a = L.bracket(e[i], L.basis_bracket(j, k))
    b = L.bracket(e[j], L.basis_bracket(k, i))
    c = L.bracket(e[k], L.basis_bracket(i, j))
    return tuple(x + y + z for x, y, z in zip(a, b, c))


def validate(L: LieLattice) -> ValidationReport:
    """Check p-integrality of the constants and the Jacobi identity.

    With antisymmetry built in, triples with a repeated index satisfy Jacobi
    automatically, so only i < j < k are checked.
    """
    for (i, j), coeffs in L.brackets.items():
        for k, c in enumerate(coeffs):
            if c.denominator % L.p == 0:
                return ValidationReport(
                    False, NotALattice.code, (i, j, k),
                    f"c({i},{j},{k}) = {c} is not {L.p}-integral",
                )
    for i, j, k in combinations(range(L.dim), 3):
        if any(jacobiator(L, i, j, k)):
            return ValidationReport(
                False, NotALieAlgebra.code, (i, j, k),
                f"Jacobi identity fails on ({L.label(i)}, {L.label(j)}, {L.label(k)})",
            )
    return ValidationReport(True)


def require_valid(L: LieLattice) -> LieLattice:
    validate(L).raise_for_error()
    return L


def _unit_vectors(d: int) -> list[Vector]:
    return [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]


def ad_matrix(L: LieLattice, x: Sequence) -> QMatrix:
    """Matrix of y -> [x, y]; column j is [x, a_j]."""
    if len(x) != L.dim:
        raise InvalidInput("coordinate vector has the wrong length")
    x = tuple(to_fraction(v) for v in x)
    cols = [L.bracket(x, e) for e in _unit_vectors(L.dim)]
    return QMatrix.from_columns(cols)


def ad_basis(L: LieLattice) -> list[QMatrix]:
    return [ad_matrix(L, e) for e in _unit_vectors(L.dim)]


@dataclass(frozen=True)
class KillingData:
    A: QMatrix
    detA: Fraction
    vp_detA: object


def killing_matrix(L: LieLattice) -> KillingData:
    ads = ad_basis(L)
    d = L.dim
    A = QMatrix([[(ads[i] @ ads[j]).trace() for j in range(d)] for i in range(d)])
    det = A.det()
    return KillingData(A, det, vp(det, L.p))


def killing_by_constants(L: LieLattice) -> QMatrix:
    """Killing matrix as sum_{k,l} c(i,k,l) c(j,l,k), without forming ad."""
    d = L.dim
    c = L.structure_constant
    return QMatrix(
        [[sum((c(i, k, l) * c(j, l, k) for k in range(d) for l in range(d)), _ZERO)
          for j in range(d)] for i in range(d)]
    )


@dataclass(frozen=True)
class SemisimpleCertificate:
    semisimple: bool
    detA: Fraction
    vp_detA: object


def is_semisimple(L: LieLattice) -> SemisimpleCertificate:
    # Cartan's criterion; the valuation is reported but does not enter the verdict
    k = killing_matrix(L)
    return SemisimpleCertificate(k.detA != 0, k.detA, k.vp_detA)


def is_powerful(L: LieLattice) -> bool:
    need = 2 if L.p == 2 else 1
    return all(vp_fast(c, L.p) >= need for cs in L.brackets.values() for c in cs)


def bracket_span(L: LieLattice, U: Sequence[Vector], V: Sequence[Vector]) -> list[Vector]:
    return row_space_basis(L.bracket(u, v) for u in U for v in V)


@dataclass(frozen=True)
class SeriesProfile:
    lower_central_ranks: tuple[int, ...]
    derived_ranks: tuple[int, ...]
    nilpotency_class: int | None
    solvable: bool


def _series(L: LieLattice, derived: bool) -> list[list[Vector]]:
    full = _unit_vectors(L.dim)
    terms = [full]
    while terms[-1]:
        prev = terms[-1]
        nxt = bracket_span(L, prev, prev) if derived else bracket_span(L, full, prev)
        if len(nxt) == len(prev):
            break
        terms.append(nxt)
    return terms


def lower_central_series(L: LieLattice) -> list[list[Vector]]:
    """Q_p-bases of L = L^1 > L^2 > ... until zero or stabilisation."""
    return _series(L, derived=False)


def series_profile(L: LieLattice) -> SeriesProfile:
    lcs = [len(t) for t in _series(L, derived=False)]
    ds = [len(t) for t in _series(L, derived=True)]
    nil_class = len(lcs) - 1 if lcs[-1] == 0 else None
    return SeriesProfile(tuple(lcs), tuple(ds), nil_class, ds[-1] == 0)


def _leibniz_system(L: LieLattice) -> list[list[Fraction]]:
    # unknown D[r][s] sits at index r*d + s; D applied to a_j is column j
    d = L.dim
    rows = []
    for i, j in combinations(range(d), 2):
        cij = L.basis_bracket(i, j)
        for k in range(d):
            row = [_ZERO] * (d * d)
            # (D[a_i, a_j])_k = sum_l D[k][l] c(i,j,l)
            for l in range(d):
                if cij[l]:
                    row[k * d + l] += cij[l]
            # ([D a_i, a_j])_k = sum_r D[r][i] c(r,j,k)
            for r in range(d):
                c = L.structure_constant(r, j, k)
                if c:
                    row[r * d + i] -= c
            # ([a_i, D a_j])_k = sum_r D[r][j] c(i,r,k)
            for r in range(d):
                c = L.structure_constant(i, r, k)
                if c:
                    row[r * d + j] -= c
            if any(row):
                rows.append(row)
    return rows


def _vec_to_matrix(v: Vector, d: int) -> QMatrix:
    return QMatrix([v[r * d:(r + 1) * d] for r in range(d)])


def _matrix_to_vec(m: QMatrix) -> Vector:
    return tuple(x for r in m.rows for x in r)


def associative_chain(mats: Sequence[QMatrix], limit: int) -> tuple[bool, int]:
    """Decide whether every element of span(mats) is nilpotent.

    Builds span(A), span(A·A), ... ; these reach zero iff the span consists
    of simultaneously triangularisable nilpotent matrices.  Returns the verdict
    and the number of steps taken.
    """
    if not mats:
        return True, 0
    d = mats[0].nrows
    current = row_space_basis(_matrix_to_vec(m) for m in mats)
    steps = 1
    while current and steps <= limit:
        prods = [_vec_to_matrix(v, d) @ m for v in current for m in mats]
        nxt = row_space_basis(_matrix_to_vec(m) for m in prods)
        steps += 1
        if not nxt:
            return True, steps - 1
        if len(nxt) == len(current) and nxt == current:
            return False, steps
        current = nxt
    return not current, steps


def lie_chain(mats: Sequence[QMatrix], limit: int) -> tuple[bool, int]:
    """Lower central series of the matrix Lie algebra spanned by ``mats``."""
    if not mats:
        return True, 0
    d = mats[0].nrows
    base = [_vec_to_matrix(v, d) for v in row_space_basis(_matrix_to_vec(m) for m in mats)]
    current = base
    steps = 1
    while current and steps <= limit:
        brs = [a @ b - b @ a for a in base for b in current]
        nxt = [_vec_to_matrix(v, d) for v in row_space_basis(_matrix_to_vec(m) for m in brs)]
        steps += 1
        if not nxt:
            return True, steps - 1
        if len(nxt) == len(current):
            return False, steps
        current = nxt
    return not current, steps


@dataclass(frozen=True)
class DerivationAlgebra:
    basis: tuple[QMatrix, ...]
    dim: int
    nilpotent: bool
    chain_length: int
    lie_nilpotent: bool


def derivations(L: LieLattice) -> DerivationAlgebra:
    """Der(L) as the solution space of the Leibniz system.

    ``nilpotent`` means every derivation is a nilpotent endomorphism, which is
    what forces the eigenvalues of every automorphism to be roots of unity.
    ``lie_nilpotent`` is the weaker statement that Der(L) is a nilpotent Lie
    algebra (true for gl_1, for instance).
    """
    d = L.dim
    sols = nullspace(_leibniz_system(L), d * d)
    basis = tuple(_vec_to_matrix(v, d) for v in sols)
    nil, length = associative_chain(basis, d + 1)
    lie_nil, _ = lie_chain(basis, d * d)
    return DerivationAlgebra(basis, len(basis), nil, length, lie_nil)


def centroid(L: LieLattice) -> list[QMatrix]:
    """Basis of {C : C ad(a_i) = ad(a_i) C for all i}."""
    d = L.dim
    rows = []
    for ad in ad_basis(L):
        # (C·ad - ad·C)[r][s] = sum_t C[r][t] ad[t][s] - ad[r][t] C[t][s]
        for r in range(d):
            for s in range(d):
                row = [_ZERO] * (d * d)
                for t in range(d):
                    if ad[t, s]:
                        row[r * d + t] += ad[t, s]
                    if ad[r, t]:
                        row[t * d + s] -= ad[r, t]
                if any(row):
                    rows.append(row)
    return [_vec_to_matrix(v, d) for v in nullspace(rows, d * d)]


@dataclass(frozen=True)
class SimplicityReport:
    semisimple: bool
    centroid_dim: int
    simple: bool | str
    just_infinite: bool | str


def _centroid_splits(basis: Sequence[QMatrix]) -> bool:
    """True when the centroid visibly contains zero divisors.

    Looks for an element whose characteristic polynomial has two distinct
    irreducible factors over Q; such an element yields a nontrivial
    idempotent, so the centroid is not a field.
    """
    from sympy import Poly, Rational, symbols

    x = symbols("x")
    candidates = list(basis)
    generic = basis[0] * 0
    for n, c in enumerate(basis, start=1):
        generic = generic + c * n
    candidates.append(generic)
    for m in candidates:
        coeffs = m.charpoly()
        poly = Poly([Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
        _, factors = poly.factor_list()
        if len(factors) > 1:
            return True
    return False


def simplicity_report(L: LieLattice) -> SimplicityReport:
    ss = is_semisimple(L).semisimple
    cent = centroid(L)
    cdim = len(cent)
    if ss:
        if cdim == 1:
            simple = True
        elif _centroid_splits(cent):
            simple = False
        else:
            simple = "indeterminate"
    else:
        simple = False
    if L.dim == 1:
        just_inf = True
    elif simple == "indeterminate":
        just_inf = "indeterminate"
    else:
        just_inf = bool(simple)
    return SimplicityReport(ss, cdim, simple, just_inf)


def scaled(L: LieLattice, factor) -> LieLattice:
    """Lattice with every structure constant multiplied by ``factor``.

    For factor = p this is the Lie lattice pL written in the basis p·a_i.
    """
    f = to_fraction(factor)
    return LieLattice(
        f"{L.name}*{f}", L.p, L.dim,
        {k: tuple(f * c for c in v) for k, v in L.brackets.items()}, L.labels,
    )


def structure_in(L: LieLattice, B: QMatrix) -> dict[tuple[int, int], Vector]:
    """Constants of the sublattice spanned by the columns of B, in that basis."""
    return L.in_basis(B).brackets


__all__ = [
    "INF",
    "LieLattice",
    "ValidationReport",
    "KillingData",
    "SeriesProfile",
    "DerivationAlgebra",
    "SimplicityReport",
    "validate",
    "require_valid",
    "ad_matrix",
    "killing_matrix",
    "killing_by_constants",
    "is_semisimple",
    "is_powerful",
    "series_profile",
    "lower_central_series",
    "derivations",
    "centroid",
    "simplicity_report",
    "scaled",
]
