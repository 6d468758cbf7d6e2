"""Group law on a powerful nilpotent lattice via the truncated Hausdorff series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import BudgetError, InvalidInput, NotASubgroup, NotPowerful, UnsupportedClass
from .lattice import LieLattice, is_powerful, series_profile
from .padic import elementary_exponents, residue, to_fraction
from .sublattice import Sublattice, index

MAX_DEGREE = 4
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class GroupElement:
    """A point of L read modulo p^precision; coordinates are stored reduced."""

    coords: tuple[int, ...]
    precision: int
    p: int

    @classmethod
    def make(cls, coords: Sequence, precision: int, p: int) -> GroupElement:
        if precision < 1:
            raise InvalidInput("precision must be positive")
        q = p**precision
        return cls(tuple(residue(to_fraction(c), q) for c in coords), precision, p)

    @property
    def modulus(self) -> int:
        return self.p**self.precision


@dataclass(frozen=True)
class BCHConfig:
    max_degree: int
    nilpotency_class: int
    p: int


def bch_config(L: LieLattice) -> BCHConfig:
    if L.p == 2:
        raise UnsupportedClass("p = 2 is not supported by the group layer")
    if not is_powerful(L):
        raise NotPowerful(f"{L.name} is not powerful at p = {L.p}")
    c = series_profile(L).nilpotency_class
    if c is None:
        raise UnsupportedClass("lattice is not nilpotent; the series does not terminate")
    if c >= L.p or c > MAX_DEGREE:
        raise UnsupportedClass(f"class {c} needs c < p = {L.p} and c <= {MAX_DEGREE}")
    return BCHConfig(c, c, L.p)


def bch(L: LieLattice, x: Sequence[Fraction], y: Sequence[Fraction], degree: int) -> tuple[Fraction, ...]:
    """log(exp x · exp y) through the given degree, in exact rationals."""
    x = tuple(to_fraction(v) for v in x)
    y = tuple(to_fraction(v) for v in y)
    br = L.bracket
    terms = [x, y]
    if degree >= 2:
        xy = br(x, y)
        terms.append(tuple(v / 2 for v in xy))
        if degree >= 3:
            xxy = br(x, xy)
            yyx = br(y, br(y, x))
            terms.append(tuple((a + b) / 12 for a, b in zip(xxy, yyx)))
            if degree >= 4:
                yxxy = br(y, xxy)
                terms.append(tuple(-v / 24 for v in yxxy))
    return tuple(sum(col, Fraction(0)) for col in zip(*terms))


def bch_mul(L: LieLattice, g: GroupElement, h: GroupElement, config: BCHConfig | None = None) -> GroupElement:
    config = config or bch_config(L)
    if g.precision != h.precision or g.p != L.p or h.p != L.p:
        raise InvalidInput("elements must share the prime and the precision")
    if len(g.coords) != L.dim or len(h.coords) != L.dim:
        raise InvalidInput("coordinate vector has the wrong length")
    z = bch(L, g.coords, h.coords, config.max_degree)
    return GroupElement.make(z, g.precision, L.p)


def identity(L: LieLattice, precision: int) -> GroupElement:
    return GroupElement.make([0] * L.dim, precision, L.p)


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement.make([-c for c in g.coords], g.precision, g.p)


def group_dimension(L: LieLattice) -> int:
    return L.dim


@dataclass(frozen=True)
class GroupIndexReport:
    group_count: int
    lattice_exponent: int
    lattice_index: int
    subgroup_order: int
    agree: bool


def _reduction_of(M: Sublattice, q: int) -> set[tuple[int, ...]]:
    d = M.parent.dim
    gens = [tuple(residue(x, q) for x in col) for col in M.B.columns()]
    elems = {tuple([0] * d)}
    for gvec in gens:
        new = set()
        for s in elems:
            cur = s
            while True:
                new.add(cur)
                cur = tuple((a + b) % q for a, b in zip(cur, gvec))
                if cur == s:
                    break
        elems = new
    return elems


def group_index_check(L: LieLattice, M: Sublattice, e: int, budget: int = DEFAULT_BUDGET) -> GroupIndexReport:
    """Count cosets of the image of M in L/p^e L under the group law.

    Requires p^e L inside M, so that the count is the full index.
    """
    config = bch_config(L)
    p, d = L.p, L.dim
    exps, _ = elementary_exponents(M.B, p)
    if e < max(exps, default=0):
        raise InvalidInput(f"precision {e} too small: need p^e L inside M (e >= {max(exps)})")
    q = p**e
    total = q**d
    if total > budget:
        raise BudgetError(f"group of order {total} exceeds budget {budget}", partial=0)
    H = _reduction_of(M, q)
    H_elems = [GroupElement(h, e, p) for h in sorted(H)]
    gens = [GroupElement.make(col, e, p) for col in M.B.columns()]
    for a in H_elems:
        for b in gens:
            if bch_mul(L, a, b, config).coords not in H:
                raise NotASubgroup("image of M is not closed under the group law")
    seen: set[tuple[int, ...]] = set()
    cosets = 0
    for coords in product(range(q), repeat=d):
        if coords in seen:
            continue
        g = GroupElement(coords, e, p)
        orbit = {bch_mul(L, g, h, config).coords for h in H_elems}
        if len(orbit) != len(H) or orbit & seen:
            raise NotASubgroup("cosets overlap; image of M is not a subgroup")
        seen |= orbit
        cosets += 1
    n = index(M)
    return GroupIndexReport(cosets, n, p**n, len(H), cosets == p**n)
