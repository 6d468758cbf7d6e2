import random
from fractions import Fraction
from itertools import product

import pytest
import sympy

from families import chevalley, random_sl2_automorphism, random_so3_automorphism
from lielat.catalog import CATALOG, abelian, builtin, heisenberg, heisenberg_powerful, sl2, sl2_plus_sl2, so3
from lielat.errors import InvalidInput, NotALattice, NotALieAlgebra
from lielat.lattice import (
    LieLattice,
    ad_matrix,
    centroid,
    derivations,
    is_powerful,
    is_semisimple,
    killing_by_constants,
    killing_matrix,
    require_valid,
    series_profile,
    simplicity_report,
    validate,
)
from lielat.padic import QMatrix


def catalog(p):
    return [abelian(p, 1), abelian(p, 2), abelian(p, 3), heisenberg(p), heisenberg_powerful(p),
            sl2(p), so3(p), sl2_plus_sl2(p)]


def unit(d, i):
    return tuple(int(i == j) for j in range(d))


def brute_jacobi(L):
    d = L.dim
    for i, j, k in product(range(d), repeat=3):
        x, y, z = unit(d, i), unit(d, j), unit(d, k)
        s = [a + b + c for a, b, c in zip(
            L.bracket(x, L.bracket(y, z)), L.bracket(y, L.bracket(z, x)), L.bracket(z, L.bracket(x, y)))]
        if any(s):
            return False
    return True


def brute_killing(L):
    # kappa(x, y) = sum_k coordinate k of [x, [y, a_k]]
    d = L.dim
    return [[sum(L.bracket(unit(d, i), L.bracket(unit(d, j), unit(d, k)))[k] for k in range(d))
             for j in range(d)] for i in range(d)]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_catalog_validates(p):
    for L in catalog(p):
        assert validate(L).ok
        assert brute_jacobi(L)


def test_jacobi_failure_reported():
    bad = LieLattice("bad", 5, 3, {(0, 1): (0, 0, 1), (0, 2): (1, 0, 0), (1, 2): (0, 1, 0)})
    assert not brute_jacobi(bad)
    rep = validate(bad)
    assert not rep.ok and rep.error == "not-a-lie-algebra" and rep.where == (0, 1, 2)
    with pytest.raises(NotALieAlgebra):
        require_valid(bad)


def test_non_integral_constant_is_not_a_lattice():
    L = LieLattice("frac", 3, 2, {(0, 1): (Fraction(1, 3), 0)})
    rep = validate(L)
    assert rep.error == "not-a-lattice"
    with pytest.raises(NotALattice):
        require_valid(L)
    assert validate(L.with_p(5)).ok


def test_bad_construction():
    with pytest.raises(InvalidInput):
        LieLattice("x", 4, 2, {})
    with pytest.raises(InvalidInput):
        LieLattice("x", 3, 2, {(1, 0): (1, 0)})
    with pytest.raises(InvalidInput):
        builtin("nope", 3)


def test_ad_matrix_examples():
    assert ad_matrix(sl2(5), (0, 1, 0)) == QMatrix.diag(2, 0, -2)
    assert ad_matrix(abelian(3, 2), (4, 7)) == QMatrix.zeros(2)
    ad_x = ad_matrix(heisenberg(5), (1, 0, 0))
    assert ad_x == QMatrix([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
    with pytest.raises(InvalidInput):
        ad_matrix(sl2(5), (1, 0))


def test_killing_sl2():
    k = killing_matrix(sl2(7))
    assert k.A == QMatrix(brute_killing(sl2(7))) == QMatrix([[0, 0, 4], [0, 8, 0], [4, 0, 0]])
    assert k.detA == -128
    assert k.vp_detA == 0
    assert killing_matrix(sl2(2)).vp_detA == 7


def test_killing_zero_forms():
    for L in (heisenberg(5), abelian(5, 3)):
        assert killing_matrix(L).A == QMatrix.zeros(L.dim)
        assert not is_semisimple(L).semisimple


def test_killing_so3():
    assert killing_matrix(so3(3)).A == QMatrix.diag(-2, -2, -2)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_killing_symmetric_and_two_routes_agree(p):
    for L in catalog(p):
        A = killing_matrix(L).A
        assert A == A.T
        assert A == killing_by_constants(L) == QMatrix(brute_killing(L))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_sl2_semisimple_any_prime(p):
    c = is_semisimple(sl2(p))
    assert c.semisimple and c.detA == -128


def test_powerful():
    assert is_powerful(abelian(5, 3))
    assert not is_powerful(heisenberg(5))
    assert is_powerful(heisenberg_powerful(5))
    # p = 2 needs [L, L] inside 4L
    assert not is_powerful(heisenberg_powerful(2))
    four = LieLattice("h4", 2, 3, {(0, 1): (0, 0, 4)})
    assert is_powerful(four)


def test_series():
    h = series_profile(heisenberg(5))
    assert h.lower_central_ranks == (3, 1, 0) and h.nilpotency_class == 2 and h.solvable
    a = series_profile(abelian(3, 2))
    assert a.nilpotency_class == 1 and a.solvable
    s = series_profile(sl2(5))
    assert s.derived_ranks == (3,) and not s.solvable and s.nilpotency_class is None


def _leibniz_dimension(L):
    """Oracle: solve D[x,y] = [Dx,y] + [x,Dy] symbolically with sympy."""
    d = L.dim
    c = [[[sympy.Rational(str(L.structure_constant(i, j, k))) for k in range(d)] for j in range(d)]
         for i in range(d)]

    def br(u, v):
        return sympy.Matrix([sum(u[i] * v[j] * c[i][j][k] for i in range(d) for j in range(d))
                             for k in range(d)])

    D = sympy.Matrix(d, d, sympy.symbols(f"D0:{d * d}"))
    eqs = []
    for i in range(d):
        for j in range(i + 1, d):
            x, y = sympy.Matrix(unit(d, i)), sympy.Matrix(unit(d, j))
            eqs.extend(list(D * br(x, y) - br(D * x, y) - br(x, D * y)))
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return d * d
    A, _ = sympy.linear_eq_to_matrix(eqs, list(D))
    return d * d - A.rank()


def test_derivation_dimensions():
    assert derivations(abelian(3, 2)).dim == 4 == _leibniz_dimension(abelian(3, 2))
    assert derivations(sl2(5)).dim == 3 == _leibniz_dimension(sl2(5))
    assert derivations(heisenberg(5)).dim == 6 == _leibniz_dimension(heisenberg(5))


def test_derivations_satisfy_leibniz():
    L = heisenberg(5)
    for D in derivations(L).basis:
        for i in range(3):
            for j in range(3):
                x, y = unit(3, i), unit(3, j)
                assert D @ L.bracket(x, y) == tuple(
                    a + b for a, b in zip(L.bracket(D @ x, y), L.bracket(x, D @ y)))


def test_derivation_nilpotency():
    assert not derivations(abelian(3, 2)).nilpotent
    # gl_1 is a nilpotent Lie algebra, but its element 1 is not a nilpotent map
    der1 = derivations(abelian(3, 1))
    assert der1.lie_nilpotent and not der1.nilpotent
    assert not derivations(heisenberg(5)).nilpotent


def test_characteristically_nilpotent_detected():
    # span of strictly upper triangular maps: A^2 = span(n2) and A^3 = 0, so two nonzero powers
    from lielat.lattice import associative_chain

    n1 = QMatrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    n2 = QMatrix([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    assert n1 @ n1 == n2 and n1 @ n1 @ n1 == QMatrix.zeros(3)
    assert associative_chain([n1, n2], 4) == (True, 2)
    assert associative_chain([QMatrix.identity(3)], 4)[0] is False


@pytest.mark.parametrize("p", [3, 5])
def test_semisimple_means_all_derivations_inner(p):
    for L in catalog(p):
        if is_semisimple(L).semisimple:
            assert derivations(L).dim == L.dim


def test_simplicity():
    r = simplicity_report(sl2(5))
    assert (r.semisimple, r.centroid_dim, r.simple, r.just_infinite) == (True, 1, True, True)
    r = simplicity_report(sl2_plus_sl2(5))
    assert (r.centroid_dim, r.simple, r.just_infinite) == (2, False, False)
    r = simplicity_report(abelian(5, 2))
    assert not r.semisimple and r.just_infinite is False
    assert simplicity_report(abelian(5, 1)).just_infinite is True
    assert simplicity_report(so3(3)).simple is True


def test_centroid_commutes_with_ad():
    L = sl2_plus_sl2(3)
    cent = centroid(L)
    assert len(cent) == 2
    for C in cent:
        for i in range(L.dim):
            ad = ad_matrix(L, unit(L.dim, i))
            assert C @ ad == ad @ C


def test_series_invariant_under_automorphisms():
    rng = random.Random(4)
    for _ in range(10):
        L = sl2(5)
        S = random_sl2_automorphism(rng, L)
        assert series_profile(L.in_basis(S)) == series_profile(L)
        L = so3(5)
        S = random_so3_automorphism(rng, 5)
        assert series_profile(L.in_basis(S)) == series_profile(L)
    H = heisenberg(5)
    assert series_profile(H.in_basis(QMatrix.diag(5, 1, 5))) == series_profile(H)


def test_automorphisms_preserve_killing():
    rng = random.Random(9)
    L = sl2(3)
    A = killing_matrix(L).A
    for _ in range(20):
        S = random_sl2_automorphism(rng, L)
        assert S.T @ A @ S == A
    assert chevalley().T @ A @ chevalley() == A


def test_catalog_names():
    assert set(CATALOG) == {"abelian", "heisenberg", "heisenberg_powerful", "sl2", "so3", "sl2_plus_sl2"}
    assert builtin("abelian", 3, dim="4").dim == 4
