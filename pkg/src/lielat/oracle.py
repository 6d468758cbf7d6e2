"""Brute-force oracle: sublattice enumeration and finite-precision isomorphism search.

Nothing in here consults the Killing-form argument; violations of index
stability are found by direct search and only reported once an exact
rational isomorphism has been constructed and re-verified.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Sequence

from .errors import BudgetError, InvalidInput
from .lattice import LieLattice, series_profile
from .padic import QMatrix, balanced, elementary_exponents, residue
from .stability import iso_index_check
from .sublattice import Sublattice, gram, index, is_subalgebra

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 200_000
EXHAUSTIVE_MAX_DIM = 3


def count_hnf(d: int, p: int, n: int) -> int:
    """Number of index-p^n sublattices of Z_p^d (sum over pivot exponents)."""
    total = 0
    for exps in product(range(n + 1), repeat=d):
        if sum(exps) == n:
            c = 1
            for i, k in enumerate(exps):
                c *= p ** (k * i)
            total += c
    return total


def iter_hnf(d: int, p: int, k: int):
    """Hermite matrices with pivot exponents summing to at most k.

    Order: pivot exponent vectors lexicographically, then the off-pivot
    entries lexicographically in row-major order.
    """
    for exps in product(range(k + 1), repeat=d):
        if sum(exps) > k:
            continue
        slots = [(i, j) for i in range(d) for j in range(i)]
        ranges = [range(p ** exps[i]) for i, _ in slots]
        for vals in product(*ranges):
            H = [[0] * d for _ in range(d)]
            for i in range(d):
                H[i][i] = p ** exps[i]
            for (i, j), v in zip(slots, vals):
                H[i][j] = v
            yield exps, H


@dataclass
class EnumReport:
    p: int
    k: int
    items: list[Sublattice]
    exponents: list[int]
    subalgebra: list[bool]
    counts: dict[int, int]

    def subalgebras(self) -> list[Sublattice]:
        return [m for m, s in zip(self.items, self.subalgebra) if s]


def enum_subalgebras(L: LieLattice, k: int, budget: int = DEFAULT_BUDGET) -> EnumReport:
    """Every sublattice of index at most p^k, each tagged with is_subalgebra."""
    if k < 0:
        raise InvalidInput("k must be non-negative")
    p, d = L.p, L.dim
    expected = sum(count_hnf(d, p, n) for n in range(k + 1))
    items, exps, flags = [], [], []
    counts = {n: 0 for n in range(k + 1)}
    for pivots, H in iter_hnf(d, p, k):
        if len(items) >= budget:
            raise BudgetError(
                f"enumeration needs {expected} sublattices, budget is {budget}", partial=len(items)
            )
        M = Sublattice(L, QMatrix(H))
        items.append(M)
        n = sum(pivots)
        exps.append(n)
        counts[n] += 1
        flags.append(is_subalgebra(M))
    return EnumReport(p, k, items, exps, flags, counts)


# --- isomorphism search -----------------------------------------------------


def _table(consts: dict, d: int, conv) -> list[list[tuple]]:
    zero = tuple(conv(0) for _ in range(d))
    t = [[zero] * d for _ in range(d)]
    for (i, j), c in consts.items():
        t[i][j] = tuple(conv(x) for x in c)
        t[j][i] = tuple(conv(-x) for x in c)
    return t


class _Arith:
    """Scalar arithmetic for the search: integers mod q, or exact rationals."""

    def __init__(self, p: int, modulus: int | None):
        self.p = p
        self.q = modulus

    def conv(self, x):
        x = Fraction(x)
        return residue(x, self.q) if self.q else x

    def norm(self, x):
        return x % self.q if self.q else x

    def unit_inverse(self, u):
        if self.q:
            return pow(u, -1, self.q) if u % self.p else None
        if u == 0 or u.numerator % self.p == 0:
            return None
        return 1 / u

    def acceptable(self, x) -> bool:
        return True if self.q else x.denominator % self.p != 0

    def mod_p(self, x) -> int:
        return x % self.p if self.q else residue(x, self.p)


class _IsoSearch:
    """Backtracking search for g with g[x, y]_src = [g x, g y]_dst.

    Columns g(a_i) are assigned one at a time.  A column is forced when some
    already-assigned pair brackets onto it with a unit coefficient; otherwise
    it runs over representatives of F_p^d outside the span of the previous
    columns mod p (balanced representatives in exact mode).
    """

    def __init__(self, src: dict, dst: dict, d: int, p: int, modulus: int | None):
        self.d, self.p = d, p
        self.ar = _Arith(p, modulus)
        self.src = _table(src, d, self.ar.conv)
        self.dst = _table(dst, d, self.ar.conv)
        self.order, self.forcing, self.checks = self._plan()
        reps = list(product(range(p), repeat=d))
        if modulus is None:
            reps = [tuple(Fraction(balanced(x, p)) for x in v) for v in reps]
        self.reps = reps
        self.nodes = 0

    def _support(self, i, j):
        return {l for l, c in enumerate(self.src[i][j]) if c}

    def _plan(self):
        d = self.d
        best = None
        for order in permutations(range(d)):
            pos = {c: t for t, c in enumerate(order)}
            forcing = []
            for t, c in enumerate(order):
                force = None
                for i, j in combinations(sorted(order[:t]), 2):
                    sup = self._support(i, j)
                    coeff = self.src[i][j][c]
                    if coeff and self.ar.unit_inverse(coeff) is not None and all(pos[l] <= t for l in sup):
                        force = (i, j)
                        break
                forcing.append(force)
            score = sum(f is not None for f in forcing)
            if best is None or score > best[0]:
                best = (score, order, forcing)
        _, order, forcing = best
        pos = {c: t for t, c in enumerate(order)}
        checks = [[] for _ in range(d)]
        for i, j in combinations(range(d), 2):
            last = max([pos[i], pos[j]] + [pos[l] for l in self._support(i, j)])
            checks[last].append((i, j))
        return order, forcing, checks

    def _bracket(self, x, y):
        d, t = self.d, self.dst
        out = [0] * d
        for r in range(d):
            if not x[r]:
                continue
            row = t[r]
            for s in range(d):
                if not y[s]:
                    continue
                f = x[r] * y[s]
                c = row[s]
                for k in range(d):
                    if c[k]:
                        out[k] += f * c[k]
        return tuple(self.ar.norm(v) for v in out)

    def _image(self, g, vec):
        d = self.d
        out = [0] * d
        for l, c in enumerate(vec):
            if c:
                col = g[l]
                for k in range(d):
                    out[k] += c * col[k]
        return tuple(self.ar.norm(v) for v in out)

    def _ok(self, g, pairs):
        return all(self._image(g, self.src[i][j]) == self._bracket(g[i], g[j]) for i, j in pairs)

    @staticmethod
    def _span(vecs, p, d):
        span = {tuple([0] * d)}
        for v in vecs:
            span = {tuple((a + c * b) % p for a, b in zip(s, v)) for s in span for c in range(p)}
        return span

    def solutions(self, limit: int | None = 1, node_budget: int | None = None):
        """Yield solutions as lists of columns in the original basis order."""
        d, p = self.d, self.p
        g: list = [None] * d
        found = 0

        def rec(t, reduced):
            nonlocal found
            if t == d:
                found += 1
                yield list(g)
                return
            c = self.order[t]
            span = self._span(reduced, p, d)
            force = self.forcing[t]
            if force is not None:
                i, j = force
                u_inv = self.ar.unit_inverse(self.src[i][j][c])
                rest = [x - y for x, y in zip(self._bracket(g[i], g[j]), self._partial_image(g, self.src[i][j], c))]
                cands = [tuple(self.ar.norm(u_inv * x) for x in rest)]
            else:
                cands = self.reps
            for v in cands:
                if not all(self.ar.acceptable(x) for x in v):
                    continue
                red = tuple(self.ar.mod_p(x) for x in v)
                if red in span:
                    continue
                self.nodes += 1
                if node_budget is not None and self.nodes > node_budget:
                    return
                g[c] = v
                if self._ok(g, self.checks[t]):
                    yield from rec(t + 1, reduced + [red])
                    if limit is not None and found >= limit:
                        g[c] = None
                        return
                g[c] = None

        yield from rec(0, [])

    def _partial_image(self, g, vec, skip):
        d = self.d
        out = [0] * d
        for l, c in enumerate(vec):
            if c and l != skip:
                for k in range(d):
                    out[k] += c * g[l][k]
        return tuple(out)


def _solve_mod_p(rows: list[list[int]], rhs: list[int], n: int, p: int) -> list[int] | None:
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(a)) if a[i][c] % p), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    if any(row[n] % p for row in a[r:]):
        return None
    x = [0] * n
    for row, c in zip(a, piv_cols):
        x[c] = row[n]
    return x


def hensel_lift(g0, src: dict, dst: dict, d: int, p: int, e: int):
    """Lift a mod-p isomorphism (list of columns) to one mod p^e, or None.

    Each step solves the linearised bracket equations for a correction
    p^t·h over F_p.  Failure means this particular g0 does not lift.
    """
    q_final = p**e
    S = _table(src, d, lambda x: residue(Fraction(x), q_final))
    T = _table(dst, d, lambda x: residue(Fraction(x), q_final))
    g = [[int(x) % p for x in col] for col in g0]  # g[c][k]: column c, row k

    def F(g, q):
        out = {}
        for i, j in combinations(range(d), 2):
            for k in range(d):
                lhs = sum(S[i][j][l] * g[l][k] for l in range(d))
                rhs = sum(g[i][r] * g[j][s] * T[r][s][k] for r in range(d) for s in range(d))
                out[(i, j, k)] = (lhs - rhs) % q
        return out

    for t in range(1, e):
        q = p ** (t + 1)
        Fg = F(g, q)
        if any(v % p**t for v in Fg.values()):
            return None
        rows, rhs = [], []
        for (i, j, k), v in Fg.items():
            row = [0] * (d * d)  # unknown h[c][k'] at c*d + k'
            for l in range(d):
                row[l * d + k] += S[i][j][l]
            for r in range(d):
                for s in range(d):
                    tc = T[r][s][k]
                    if tc:
                        row[i * d + r] -= tc * g[j][s]
                        row[j * d + s] -= tc * g[i][r]
            rows.append([x % p for x in row])
            rhs.append((-(v // p**t)) % p)
        h = _solve_mod_p(rows, rhs, d * d, p)
        if h is None:
            return None
        g = [[(g[c][k] + p**t * h[c * d + k]) % q for k in range(d)] for c in range(d)]
    if any(F(g, q_final).values()):
        return None
    return g


# --- classification ---------------------------------------------------------


@dataclass
class IsoClassReport:
    precision: int
    method: str
    invariants: list[tuple]
    classes: list[list[int]]
    maps: dict[int, tuple[int, list]] = field(default_factory=dict)
    excluded: list[int] = field(default_factory=list)
    inconclusive: list[int] = field(default_factory=list)

    def class_of(self, idx: int) -> int:
        for n, members in enumerate(self.classes):
            if idx in members:
                return n
        raise KeyError(idx)


def _integral_constants(M: Sublattice) -> dict:
    return M.parent.in_basis(M.B).brackets


def invariant_vector(M: Sublattice, series=None, killing: bool = True) -> tuple:
    """Isomorphism invariants of M as a Z_p-Lie lattice.

    Elementary divisors of its Killing form (skipped with ``killing=False``),
    elementary divisors of [M, M] inside M, and the rational series ranks.
    """
    L, p = M.parent, M.parent.p
    g_exps, g_rank = elementary_exponents(gram(M), p) if killing else ([], None)
    consts = _integral_constants(M)
    derived_cols = [consts.get((i, j), (0,) * L.dim) for i, j in combinations(range(L.dim), 2)]
    if derived_cols and any(any(c) for c in derived_cols):
        d_exps, d_rank = elementary_exponents(QMatrix.from_columns(derived_cols), p)
    else:
        d_exps, d_rank = [], 0
    series = series or series_profile(L)
    return (
        ("gram", g_rank, tuple(g_exps)),
        ("derived", d_rank, tuple(d_exps)),
        ("series", series.lower_central_ranks, series.derived_ranks),
    )


def classify_mod_pk(
    L: LieLattice,
    items: Sequence[Sublattice],
    e: int = 1,
    budget: int = DEFAULT_BUDGET,
    killing: bool = True,
) -> IsoClassReport:
    """Partition subalgebras by invariants, refined by isomorphism mod p^e.

    Non-subalgebras are listed in ``excluded``.  The refinement runs for
    dim <= 3: an exhaustive search mod p, lifted to precision p^e by Hensel
    steps when e >= 2.  A mod-p isomorphism that fails to lift is recorded as
    inconclusive and kept in the class.
    """
    if e < 1:
        raise InvalidInput("precision must be at least 1")
    d, p = L.dim, L.p
    series = series_profile(L)
    invariants, excluded = [], []
    for n, M in enumerate(items):
        if not is_subalgebra(M):
            excluded.append(n)
            invariants.append(None)
            continue
        invariants.append(invariant_vector(M, series, killing))
    exhaustive = d <= EXHAUSTIVE_MAX_DIM
    method = "invariants-only"
    if exhaustive:
        method = "exhaustive-mod-p" if e == 1 else "exhaustive-mod-p+hensel"
    groups: dict[tuple, list[int]] = {}
    for n, inv in enumerate(invariants):
        if inv is not None:
            groups.setdefault(inv, []).append(n)
    classes: list[list[int]] = []
    maps: dict[int, tuple[int, list]] = {}
    inconclusive = []
    consts = {}
    work = 0
    for members in groups.values():
        if not exhaustive:
            classes.append(list(members))
            continue
        local: list[list[int]] = []
        for n in members:
            consts.setdefault(n, _integral_constants(items[n]))
            placed = False
            for cls in local:
                rep = cls[0]
                search = _IsoSearch(consts[rep], consts[n], d, p, modulus=p)
                sols = search.solutions(limit=None if e > 1 else 1, node_budget=budget)
                first = None
                lifted = None
                for g in sols:
                    first = first or g
                    if e == 1:
                        lifted = g
                        break
                    lifted = hensel_lift(g, consts[rep], consts[n], d, p, e)
                    if lifted is not None:
                        break
                work += search.nodes
                if first is None:
                    continue
                if lifted is None:
                    inconclusive.append(n)
                    lifted = first
                cls.append(n)
                maps[n] = (rep, lifted)
                placed = True
                break
            if not placed:
                local.append([n])
            if work > budget * 10:
                raise BudgetError("isomorphism search exceeded its budget", partial=len(maps))
        classes.extend(local)
    return IsoClassReport(e, method, invariants, classes, maps, excluded, inconclusive)


# --- stability oracle -------------------------------------------------------


@dataclass
class Violation:
    M: Sublattice
    N: Sublattice
    phi: QMatrix
    index_m: int
    index_n: int


@dataclass
class OracleReport:
    p: int
    k: int
    precision: int
    method: str
    enumerated: int
    subalgebras: int
    classes: int
    violations: list[Violation]
    unresolved: int


def exact_isomorphism(M: Sublattice, N: Sublattice, node_budget: int | None = None) -> QMatrix | None:
    """Search for phi with phi(M) = N preserving brackets exactly.

    The free columns range over balanced lifts of F_p^d; forced columns are
    computed exactly.  None means no isomorphism in that search space.
    """
    L = M.parent
    search = _IsoSearch(_integral_constants(M), _integral_constants(N), L.dim, L.p, modulus=None)
    for g in search.solutions(limit=1, node_budget=node_budget):
        G = QMatrix.from_columns(g)
        return N.B @ G @ M.B.inverse()
    return None


def exhaustive_stability_check(
    L: LieLattice, k: int, e: int = 1, budget: int = DEFAULT_BUDGET, killing: bool = True
) -> OracleReport:
    """Look for isomorphic subalgebras of different index among those of index <= p^k.

    Within each finite-precision class, members are grouped by exact
    isomorphism (found by search); each exact group whose members disagree on
    the index yields violations (rep, member).  Every violation is
    re-verified with iso_index_check before it is reported.
    """
    enum = enum_subalgebras(L, k, budget)
    subs = enum.subalgebras()
    cls = classify_mod_pk(L, subs, e, budget, killing)
    violations = []
    unresolved = 0
    for members in cls.classes:
        if len({index(subs[n]) for n in members}) < 2:
            continue
        exact_groups: list[list[tuple[int, QMatrix | None]]] = []
        for n in members:
            placed = False
            for grp in exact_groups:
                rep = grp[0][0]
                phi = exact_isomorphism(subs[rep], subs[n], node_budget=budget)
                if phi is not None:
                    grp.append((n, phi))
                    placed = True
                    break
            if not placed:
                exact_groups.append([(n, None)])
        if len(exact_groups) > 1:
            # distinct exact groups inside one mod-p class: not proven non-isomorphic
            unresolved += len(exact_groups) - 1
        for grp in exact_groups:
            rep = grp[0][0]
            R = subs[rep]
            for n, phi in grp[1:]:
                N = subs[n]
                if index(N) == index(R):
                    continue
                check = iso_index_check(L, R, N, phi)
                violations.append(Violation(R, N, phi, check.index_m, check.index_n))
    log.debug("oracle %s: %d violations", L.name, len(violations))
    return OracleReport(
        L.p, k, e, cls.method, len(enum.items), len(subs), len(cls.classes), violations, unresolved
    )
