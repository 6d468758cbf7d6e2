import random
from fractions import Fraction

import pytest

from families import (
    chevalley,
    exp_nilpotent,
    random_sl2_automorphism,
    random_so3_automorphism,
    random_subalgebra,
)
from lielat.catalog import abelian, heisenberg, heisenberg_powerful, sl2, sl2_plus_sl2, so3
from lielat.errors import BasisMismatch, InvalidInput, InvalidIso, NotAnAutomorphism
from lielat.padic import INF, QMatrix, vp
from lielat.stability import (
    automorphism_check,
    index_ratio,
    iso_index_check,
    search_unstable_witness,
    serre_verdict,
    stability_certificate,
    witness_candidates,
)
from lielat.sublattice import Sublattice, scale_power, transform, whole

P = 5


def sub(L, *diag):
    return Sublattice(L, QMatrix.diag(*diag))


def test_automorphism_check_examples():
    a = automorphism_check(sl2(P), chevalley())
    assert a.verified and chevalley().det() == 1 and a.det_valuation == 0
    a = automorphism_check(abelian(P, 2), QMatrix.identity(2) * P)
    assert a.verified and a.det_valuation == 2
    swap_eh = QMatrix.from_columns([(0, 1, 0), (1, 0, 0), (0, 0, 1)])
    assert not automorphism_check(sl2(P), swap_eh).verified
    singular = automorphism_check(abelian(P, 2), QMatrix.zeros(2))
    assert not singular.verified and singular.det_valuation is INF
    with pytest.raises(InvalidInput):
        automorphism_check(sl2(P), QMatrix.identity(2))


def test_automorphism_check_brute_force():
    # verified iff S[x, y] = [Sx, Sy] for every pair of basis vectors
    rng = random.Random(2)
    L = heisenberg(3)
    for _ in range(60):
        S = QMatrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        if S.det() == 0:
            continue
        cols = S.columns()
        ok = all(S @ L.basis_bracket(i, j) == L.bracket(cols[i], cols[j]) for i in range(3) for j in range(3))
        assert automorphism_check(L, S).verified == ok


def test_serre_examples():
    v = serre_verdict(sl2(P), automorphism_check(sl2(P), chevalley()))
    assert v.passes and v.norm_det == 1 and list(v.eigen_valuations) == [0, 0, 0]
    v = serre_verdict(abelian(P, 2), automorphism_check(abelian(P, 2), QMatrix.identity(2) * P))
    assert not v.passes and v.norm_det == Fraction(1, P**2)
    s = QMatrix.diag(P, 1, P)
    H = heisenberg(P)
    # [px, y] = p z = s(z)
    assert H.bracket(s @ (1, 0, 0), s @ (0, 1, 0)) == s @ H.basis_bracket(0, 1)
    v = serre_verdict(H, automorphism_check(H, s))
    assert not v.passes and v.norm_det == Fraction(1, P**2) and sorted(v.eigen_valuations) == [0, 1, 1]


def test_serre_rejects_unverified():
    bad = automorphism_check(sl2(P), QMatrix.diag(1, 2, 3))
    with pytest.raises(NotAnAutomorphism):
        serre_verdict(sl2(P), bad)


def test_slope_sum_is_det_valuation():
    rng = random.Random(3)
    for L in (sl2(3), sl2(5)):
        for _ in range(20):
            a = automorphism_check(L, random_sl2_automorphism(rng, L))
            assert a.verified
            assert sum(serre_verdict(L, a).eigen_valuations) == a.det_valuation == 0


def test_iso_index_check_examples():
    L = abelian(P, 3)
    pL = scale_power(L, 1)
    r = iso_index_check(L, pL, pL, QMatrix.identity(3))
    assert (r.index_m, r.index_n, r.equal) == (3, 3, True)

    s = sl2(P)
    M = sub(s, 1, 1, P)
    r = iso_index_check(s, M, transform(M, chevalley()), chevalley())
    assert (r.index_m, r.index_n, r.equal, r.gram_identity) == (1, 1, True, True)

    a = abelian(P, 2)
    r = iso_index_check(a, whole(a), scale_power(a, 1), QMatrix.identity(2) * P)
    assert (r.index_m, r.index_n, r.equal, r.gram_identity) == (0, 2, False, None)


def test_iso_index_check_errors():
    s = sl2(P)
    M = sub(s, 1, 1, P)
    with pytest.raises(InvalidIso):
        iso_index_check(s, M, M, QMatrix.diag(1, 2, 3))
    with pytest.raises(BasisMismatch):
        iso_index_check(s, M, M, chevalley())
    with pytest.raises(InvalidIso):
        iso_index_check(s, sub(s, 1, P, 1), sub(s, 1, P, 1), QMatrix.identity(3))
    with pytest.raises(InvalidInput):
        iso_index_check(s, M, M, QMatrix.identity(2))


def test_index_ratio_examples():
    s = sl2(P)
    M = sub(s, 1, 1, P)
    assert index_ratio(s, M, M, QMatrix.identity(3)).ratio_valuation == 0
    a = abelian(P, 2)
    r = index_ratio(a, whole(a), scale_power(a, 1), QMatrix.identity(2) * P)
    assert r.ratio_valuation == -2 == -vp((QMatrix.identity(2) * P).det(), P)
    assert index_ratio(s, M, transform(M, chevalley()), chevalley()).ratio_valuation == 0


def test_index_ratio_is_minus_det_valuation():
    rng = random.Random(5)
    cases = [
        (heisenberg(P), QMatrix.diag(P, 1, P)),
        (heisenberg(P), QMatrix.diag(P, P, P * P)),
        (abelian(P, 2), QMatrix([[P, 1], [0, 1]])),
        (abelian(P, 3), QMatrix.identity(3) * P),
    ]
    for L, S in cases:
        auto = automorphism_check(L, S)
        assert auto.verified
        for _ in range(10):
            M = random_subalgebra(rng, L)
            N = transform(M, S)
            assert index_ratio(L, M, N, S).ratio_valuation == -vp(S.det(), P)


def test_certificates():
    v = stability_certificate(sl2(P))
    assert v.status == "Stable" and v.certificate["kind"] == "semisimple"
    assert v.certificate["det_killing"] == -128 and v.witness is None
    v = stability_certificate(abelian(P, 2))
    assert v.status == "Unstable" and v.witness.S == QMatrix.identity(2) * P
    v = stability_certificate(heisenberg(P))
    assert v.status == "Unstable" and v.witness.S == QMatrix.diag(P, 1, P)
    assert stability_certificate(so3(3)).status == "Stable"
    assert stability_certificate(sl2_plus_sl2(3)).status == "Stable"


def test_unknown_when_budget_exhausted():
    v = stability_certificate(heisenberg(P), budget=0)
    assert v.status == "Unknown" and v.witness is None


def test_witness_search_examples():
    w = search_unstable_witness(abelian(P, 2))
    assert w.strategy == "scalar" and w.witness.S == QMatrix.identity(2) * P
    w = search_unstable_witness(heisenberg(P))
    assert w.strategy == "graded" and w.witness.S == QMatrix.diag(P, 1, P)
    assert search_unstable_witness(sl2(P), budget=10_000).witness is None


def test_witness_search_user_candidate():
    # Heisenberg in the basis (x, y, x + y + z): no grading is diagonal, so only a user map works
    T = QMatrix.from_columns([(1, 0, 0), (0, 1, 0), (1, 1, 1)])
    L = heisenberg(3).in_basis(T)
    assert search_unstable_witness(L).witness is None
    assert stability_certificate(L).status == "Unknown"
    S = T.inverse() @ QMatrix.diag(3, 1, 3) @ T
    w = search_unstable_witness(L, candidates=[S])
    assert w.strategy == "user" and w.witness.det_valuation == 2
    v = stability_certificate(L, candidates=[S])
    assert v.status == "Unstable" and v.witness.S == S


def test_candidates_are_deterministic():
    L = heisenberg(P)
    first = [S for _, S in witness_candidates(L)]
    assert first == [S for _, S in witness_candidates(L)]
    assert first[0] == QMatrix.identity(3) * P


def test_semisimple_candidates_have_unit_determinant():
    rng = random.Random(6)
    for p in (3, 5, 7):
        L = sl2(p)
        for _, S in witness_candidates(L):
            a = automorphism_check(L, S)
            assert not a.verified or abs(S.det()) == 1
        for _ in range(20):
            S = random_sl2_automorphism(rng, L)
            assert automorphism_check(L, S).verified and abs(S.det()) == 1
            R = random_so3_automorphism(rng, p)
            assert automorphism_check(so3(p), R).verified and abs(R.det()) == 1


def test_exp_ad_is_an_automorphism():
    L = sl2(3)
    for t in (-2, 1, 3):
        assert automorphism_check(L, exp_nilpotent(L, (1, 0, 0), t)).verified
        assert automorphism_check(L, exp_nilpotent(L, (0, 0, 1), t)).verified


def test_stable_and_witness_are_exclusive():
    for p in (2, 3, 5):
        for L in (abelian(p, 1), abelian(p, 2), heisenberg(p), heisenberg_powerful(p), sl2(p), so3(p)):
            v = stability_certificate(L)
            w = search_unstable_witness(L).witness
            assert not (v.status == "Stable" and w is not None)
            assert (v.status == "Unstable") == (v.witness is not None)
