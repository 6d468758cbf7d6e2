"""Full-rank sublattices of a Lie lattice, up to Hermite normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import InvalidInput, InvalidMap, NotASublattice, NotPIntegral, SingularMatrix
from .lattice import LieLattice, killing_matrix
from .padic import QMatrix, as_qmatrix, hnf_key, hnf_p, vp_fast


@dataclass(frozen=True, eq=False)
class Sublattice:
    """Z_p-span of the columns of ``B`` (coordinates in the parent basis)."""

    parent: LieLattice
    B: QMatrix
    hnf: QMatrix = field(init=False, repr=False)

    def __post_init__(self):
        B = as_qmatrix(self.B)
        object.__setattr__(self, "B", B)
        if B.shape != (self.parent.dim, self.parent.dim):
            raise InvalidInput(f"basis matrix must be {self.parent.dim}x{self.parent.dim}")
        if not B.is_p_integral(self.parent.p):
            raise NotPIntegral("generators must be p-integral")
        try:
            h = hnf_p(B, self.parent.p)
        except SingularMatrix:
            raise SingularMatrix("sublattices must have full rank (finite index)") from None
        object.__setattr__(self, "hnf", h)

    @property
    def key(self) -> tuple:
        return hnf_key(self.hnf)

    def __eq__(self, other):
        return isinstance(other, Sublattice) and self.parent == other.parent and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def canonical(self) -> Sublattice:
        return Sublattice(self.parent, self.hnf)

    def generators(self):
        return self.B.columns()

    def contains(self, v) -> bool:
        x = self.B.solve(v)
        return x is not None and all(c.denominator % self.parent.p for c in x)


def whole(L: LieLattice) -> Sublattice:
    return Sublattice(L, QMatrix.identity(L.dim))


def is_subalgebra(M: Sublattice) -> bool:
    L = M.parent
    cols = M.B.columns()
    inv = M.B.inverse()
    for i, j in combinations(range(L.dim), 2):
        x = inv @ L.bracket(cols[i], cols[j])
        if any(c.denominator % L.p == 0 for c in x):
            return False
    return True


def index(M: Sublattice) -> int:
    """Exponent n with [L : M] = p^n, read off the Hermite pivots."""
    p = M.parent.p
    return sum(vp_fast(M.hnf[i, i], p) for i in range(M.parent.dim))


def index_in(N: Sublattice, M: Sublattice) -> int:
    """Exponent of [M : N] for N inside M."""
    if not all(M.contains(c) for c in N.B.columns()):
        raise NotASublattice("N is not contained in M")
    return index(N) - index(M)


def gram(M: Sublattice) -> QMatrix:
    A = killing_matrix(M.parent).A
    return M.B.T @ A @ M.B


def transform(M: Sublattice, s) -> Sublattice:
    s = as_qmatrix(s)
    L = M.parent
    if s.shape != (L.dim, L.dim):
        raise InvalidMap("map has the wrong shape")
    if s.det() == 0:
        raise InvalidMap("map is singular")
    C = s @ M.B
    if not C.is_p_integral(L.p):
        raise NotASublattice("image is not contained in L")
    return Sublattice(L, C)


def scale_power(X, m: int) -> Sublattice:
    """The sublattice p^m·X, for X a lattice or a sublattice."""
    if m < 0:
        raise InvalidInput("m must be non-negative")
    if isinstance(X, LieLattice):
        X = whole(X)
    return Sublattice(X.parent, X.B * X.parent.p**m)


def lattice_sum(M: Sublattice, N: Sublattice) -> Sublattice:
    L = M.parent
    gens = list(M.B.columns()) + list(N.B.columns())
    return Sublattice(L, hnf_p(QMatrix.from_columns(gens), L.p))


def intersection(M: Sublattice, N: Sublattice) -> Sublattice:
    # intersection is the dual of the sum of the duals
    L = M.parent
    duals = [M.B.inverse().T, N.B.inverse().T]
    lowest = min(vp_fast(x, L.p) for D in duals for r in D.rows for x in r if x != 0)
    factor = Fraction(L.p) ** max(0, -lowest)
    gens = [tuple(x * factor for x in c) for D in duals for c in D.columns()]
    dual_sum = hnf_p(QMatrix.from_columns(gens), L.p) * (1 / factor)
    return Sublattice(L, dual_sum.inverse().T)
