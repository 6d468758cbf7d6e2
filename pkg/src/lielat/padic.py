"""Exact rational linear algebra with p-adic valuations.

Everything here works over ``fractions.Fraction``; nothing is rounded.
Normal forms are taken over the local ring Z_(p), which for finite-index
sublattices gives the same answers as working over Z_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import InvalidInput, NotPIntegral, SingularMatrix

Vector = tuple  # tuple[Fraction, ...]


@total_ordering
class _Infinity:
    """Valuation of zero. Compares above every integer and supports no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("lielat-infinity")


INF = _Infinity()


def is_prime(n: int) -> bool:
    if not isinstance(n, int) or n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise InvalidInput(f"{p!r} is not a prime")
    return p


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"cannot read {x!r} as a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"cannot read {x!r} as a rational") from exc
    raise InvalidInput(f"cannot read {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    return str(x)


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x, p: int):
    """Exponent of ``p`` in the rational ``x``; ``INF`` for zero."""
    check_prime(p)
    x = to_fraction(x)
    if x == 0:
        return INF
    return _vp_int(abs(x.numerator), p) - _vp_int(x.denominator, p)


def vp_fast(x: Fraction, p: int):
    # no argument checking; for inner loops
    if x == 0:
        return INF
    return _vp_int(abs(x.numerator), p) - _vp_int(x.denominator, p)


def pnorm(x, p: int) -> Fraction:
    v = vp(x, p)
    if v is INF:
        return Fraction(0)
    return Fraction(p) ** (-v)


def is_p_integral(x, p: int) -> bool:
    return to_fraction(x).denominator % p != 0


def residue(x, modulus: int) -> int:
    """Image of a p-integral rational in Z/modulus (modulus a power of p)."""
    x = to_fraction(x)
    try:
        inv = pow(x.denominator, -1, modulus)
    except ValueError as exc:
        raise NotPIntegral(f"{x} has no residue modulo {modulus}") from exc
    return x.numerator * inv % modulus


def balanced(r: int, modulus: int) -> int:
    """Representative of r mod modulus in (-modulus/2, modulus/2]."""
    r %= modulus
    return r - modulus if r > modulus // 2 else r


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        pv = a[r][c]
        if pv != 1:
            a[r] = [v / pv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def row_space_basis(vectors: Iterable[Sequence]) -> list[Vector]:
    """Reduced echelon basis of the span of ``vectors``."""
    rows = [[to_fraction(v) for v in vec] for vec in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    red, _ = _rref(rows)
    return [tuple(r) for r in red]


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of {x : rows·x = 0}, one basis vector per free column."""
    red, pivots = _rref([list(r) for r in rows]) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


class QMatrix:
    """Immutable matrix of exact rationals."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if not rows or not rows[0]:
            raise InvalidInput("matrix must be non-empty")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise InvalidInput("ragged matrix")
        self._rows = rows
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> QMatrix:
        return cls([[0] * (ncols or nrows) for _ in range(nrows)])

    @classmethod
    def diag(cls, *entries) -> QMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> QMatrix:
        return cls(list(zip(*columns)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), len(self._rows[0])

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0])

    @property
    def rows(self) -> tuple[Vector, ...]:
        return self._rows

    def columns(self) -> tuple[Vector, ...]:
        return tuple(zip(*self._rows))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    @property
    def T(self) -> QMatrix:
        return QMatrix(zip(*self._rows))

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.ncols != other.nrows:
                raise InvalidInput(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return QMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows]
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise InvalidInput("vector length mismatch")
        return tuple(sum((a * to_fraction(b) for a, b in zip(r, vec)), Fraction(0)) for r in self._rows)

    def __add__(self, other: QMatrix) -> QMatrix:
        if self.shape != other.shape:
            raise InvalidInput("shape mismatch")
        return QMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: QMatrix) -> QMatrix:
        return self + (-other)

    def __neg__(self) -> QMatrix:
        return QMatrix([[-a for a in r] for r in self._rows])

    def __mul__(self, scalar) -> QMatrix:
        c = to_fraction(scalar)
        return QMatrix([[c * a for a in r] for r in self._rows])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"QMatrix([{body}])"

    def tolist(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._rows]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def trace(self) -> Fraction:
        self._require_square()
        return sum((self._rows[i][i] for i in range(self.nrows)), Fraction(0))

    def _require_square(self):
        if not self.is_square():
            raise InvalidInput(f"square matrix required, got {self.shape}")

    def det(self) -> Fraction:
        self._require_square()
        a = [list(r) for r in self._rows]
        n = len(a)
        sign = 1
        result = Fraction(1)
        for c in range(n):
            pr = next((i for i in range(c, n) if a[i][c] != 0), None)
            if pr is None:
                return Fraction(0)
            if pr != c:
                a[c], a[pr] = a[pr], a[c]
                sign = -sign
            pv = a[c][c]
            result *= pv
            for i in range(c + 1, n):
                if a[i][c] != 0:
                    f = a[i][c] / pv
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return sign * result

    def rank(self) -> int:
        return len(_rref([list(r) for r in self._rows])[1])

    def kernel(self) -> list[Vector]:
        return nullspace(self._rows, self.ncols)

    def inverse(self) -> QMatrix:
        self._require_square()
        n = self.nrows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._rows)]
        red, pivots = _rref(aug)
        if pivots[:n] != list(range(n)) or len(red) < n:
            raise SingularMatrix("matrix is singular")
        return QMatrix([r[n:] for r in red])

    def solve(self, rhs: Sequence) -> Vector | None:
        """A solution x of self·x = rhs, or None when inconsistent."""
        n = self.ncols
        aug = [list(r) + [to_fraction(b)] for r, b in zip(self._rows, rhs)]
        red, pivots = _rref(aug)
        if n in pivots:
            return None
        x = [Fraction(0)] * n
        for row, pc in zip(red, pivots):
            x[pc] = row[n]
        return tuple(x)

    def is_p_integral(self, p: int) -> bool:
        return all(x.denominator % p != 0 for r in self._rows for x in r)

    def charpoly(self) -> list[Fraction]:
        """Coefficients of det(xI - M), constant term first, monic."""
        self._require_square()
        n = self.nrows
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        # Faddeev-LeVerrier
        ident = QMatrix.identity(n)
        m_k = QMatrix.zeros(n)
        c_prev = Fraction(1)
        for k in range(1, n + 1):
            m_k = self @ m_k + ident * c_prev
            c_k = -(self @ m_k).trace() / k
            coeffs[n - k] = c_k
            c_prev = c_k
        return coeffs


def as_qmatrix(m) -> QMatrix:
    return m if isinstance(m, QMatrix) else QMatrix(m)


@dataclass(frozen=True)
class SmithProfile:
    exponents: tuple[int, ...]
    total: int


def elementary_exponents(m, p: int) -> tuple[list[int], int]:
    """p-exponents of the nonzero elementary divisors over Z_(p), and the rank.

    Works for any shape. Entries must be p-integral.
    """
    m = as_qmatrix(m)
    if not m.is_p_integral(p):
        raise NotPIntegral("matrix entry has negative valuation")
    a = [list(r) for r in m.rows]
    nr, nc = m.shape
    exps = []
    r0 = 0
    while r0 < min(nr, nc):
        best = None
        for i in range(r0, nr):
            for j in range(r0, nc):
                x = a[i][j]
                if x != 0:
                    v = vp_fast(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        a[r0], a[i] = a[i], a[r0]
        for row in a:
            row[r0], row[j] = row[j], row[r0]
        piv = a[r0][r0]
        for i in range(r0 + 1, nr):
            if a[i][r0] != 0:
                f = a[i][r0] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[r0])]
        for j in range(r0 + 1, nc):
            a[r0][j] = Fraction(0)
        exps.append(v)
        r0 += 1
    return sorted(exps), len(exps)


def smith_p(m, p: int) -> SmithProfile:
    """Smith profile {k_i} of a full-rank square p-integral matrix."""
    check_prime(p)
    m = as_qmatrix(m)
    if not m.is_square():
        raise InvalidInput("smith_p needs a square matrix")
    if not m.is_p_integral(p):
        raise NotPIntegral("matrix entry has negative valuation")
    exps, rank = elementary_exponents(m, p)
    if rank < m.nrows:
        raise SingularMatrix("matrix is singular")
    return SmithProfile(tuple(exps), sum(exps))


def hnf_p(m, p: int) -> QMatrix:
    """Column Hermite normal form over Z_(p) of a matrix with full row rank.

    Result is square, lower triangular, diagonal entries p^k_i, and the
    entries left of each pivot reduced into [0, p^k_i).  Two generator
    matrices span the same Z_(p)-module iff their forms coincide.
    """
    m = as_qmatrix(m)
    if not m.is_p_integral(p):
        raise NotPIntegral("generator with negative valuation")
    d = m.nrows
    cols = [list(c) for c in m.columns()]
    for i in range(d):
        best = None
        for j in range(i, len(cols)):
            x = cols[j][i]
            if x != 0:
                v = vp_fast(x, p)
                if best is None or v < best[0]:
                    best = (v, j)
        if best is None:
            raise SingularMatrix("generators do not span a full-rank sublattice")
        k, j = best
        cols[i], cols[j] = cols[j], cols[i]
        unit = cols[i][i] / p**k
        if unit != 1:
            cols[i] = [x / unit for x in cols[i]]
        pivot_col = cols[i]
        piv = pivot_col[i]
        for j in range(i + 1, len(cols)):
            x = cols[j][i]
            if x != 0:
                f = x / piv
                cols[j] = [a - f * b for a, b in zip(cols[j], pivot_col)]
    cols = cols[:d]
    for i in range(1, d):
        q = cols[i][i].numerator  # p**k_i
        for j in range(i):
            x = cols[j][i]
            r = residue(x, q) if q > 1 else 0
            if x != r:
                t = (x - r) / q
                cols[j] = [a - t * b for a, b in zip(cols[j], cols[i])]
    return QMatrix.from_columns(cols)


def hnf_key(h: QMatrix) -> tuple:
    return tuple(int(x) for r in h.rows for x in r)


def newton_slopes(poly: Sequence, p: int) -> list[Fraction]:
    """Valuations of the roots of ``poly`` from its Newton polygon.

    ``poly`` lists coefficients from the constant term up.  The result is
    sorted, one entry per root counted with multiplicity, so that x - p
    gives [1].
    """
    check_prime(p)
    coeffs = [to_fraction(c) for c in poly]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise InvalidInput("zero polynomial")
    if coeffs[0] == 0:
        raise InvalidInput("polynomial has zero constant term")
    pts = [(i, vp_fast(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y1 - y2, x2 - x1)] * (x2 - x1))
    return sorted(slopes)
