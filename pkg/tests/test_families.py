import math
import random
from fractions import Fraction

import pytest

import oracles
from hypercorr.cube import SetFamily, correlation, dual, influence, influences, wht
from hypercorr.errors import ClassViolation, ResourceLimit
from hypercorr.families import (
    TribesParams,
    count_families,
    enumerate_families,
    lift_pair,
    majority,
    principal,
    random_increasing,
    random_maximal_intersecting,
    threshold,
    tribe_size,
    tribes,
    tribes_closed_form,
    tribes_closed_form_exact,
    tribes_exact,
    tribes_params_for_n,
)


def test_principal():
    F = principal(3, 1)
    assert F.to_sets() == [(1,), (1, 2), (1, 3), (1, 2, 3)]
    assert influences(F).entries == (1, 0, 0)
    assert all(dual(principal(4, i)) == principal(4, i) for i in range(1, 5))


def test_threshold_and_majority():
    assert sorted(len(s) for s in majority(3).to_sets()) == [2, 2, 2, 3]
    assert threshold(3, 4) == SetFamily.empty(3)
    assert threshold(3, 0) == SetFamily.full(3)
    # an even split of the other four coordinates: C(4,2)/2^4
    maj5 = oracles.to_sets(majority(5))
    for k in range(1, 6):
        assert influence(majority(5), k) == Fraction(math.comb(4, 2), 2**4)
        assert influence(majority(5), k) == oracles.influence(5, maj5, k)
    with pytest.raises(ValueError):
        majority(4)


def test_tribes_small():
    A, B = tribes(TribesParams(2, 2))
    assert A.measure() == Fraction(7, 16) and B.measure() == Fraction(9, 16)
    assert correlation(A, B) == Fraction(17, 256)
    assert set(influences(A).entries) == {Fraction(3, 8)}
    ref = oracles.up_closure(4, [frozenset({1, 2}), frozenset({3, 4})])
    assert oracles.to_sets(A) == ref


def test_tribes_r1_degenerates():
    A, B = tribes(TribesParams(1, 4))
    assert A == SetFamily.full(4) - SetFamily.from_masks(4, [0])
    assert B == SetFamily.from_masks(4, [15])


def test_tribes_limit():
    with pytest.raises(ResourceLimit):
        tribes(TribesParams(5, 5))


def test_tribes_ratios():
    st = tribes_exact(TribesParams(2, 2))
    assert st.ratio_balanced == Fraction(136, 189)
    st = tribes_exact(TribesParams(3, 4))
    assert float(st.cor_AB) == pytest.approx(0.027203, abs=1e-6)
    assert float(st.influence_per_coord) == pytest.approx(0.167480, abs=1e-6)
    assert float(st.ratio_balanced) == pytest.approx(0.6696, abs=1e-3)
    m = round(2**10 * math.log(2))
    st = tribes_closed_form(TribesParams(10, m))
    assert abs(st.ratio_balanced - math.log(2)) < 0.02
    assert abs(st.ratio_chvatal - math.log(2) / 4) < 0.005


@pytest.mark.parametrize("r,m", [(r, m) for r in range(1, 9) for m in range(1, 17) if r * m <= 16])
def test_tribes_exact_vs_closed_form(r, m):
    p = TribesParams(r, m)
    ex = tribes_exact(p)
    cf = tribes_closed_form_exact(p)
    fl = tribes_closed_form(p)
    for key in ("mu_A", "mu_B", "cor_AB", "influence_per_coord", "ratio_chvatal", "ratio_balanced"):
        assert getattr(ex, key) == getattr(cf, key), key
        want = float(getattr(ex, key))
        assert getattr(fl, key) == pytest.approx(want, rel=1e-12, abs=1e-300), key


def test_tribe_size_rule():
    assert tribe_size(1024) == math.floor(10 - math.log2(10) + math.log2(math.log2(math.e)))
    p = tribes_params_for_n(16)
    assert p.r == tribe_size(16)


def test_dedekind_counts():
    assert [count_families(n) for n in range(6)] == [2, 3, 6, 20, 168, 7581]


@pytest.mark.parametrize("n", range(6))
def test_increasing_equals_decreasing(n):
    assert count_families(n, "increasing") == count_families(n, "decreasing")
    assert all(F.is_decreasing for F in enumerate_families(min(n, 4), "decreasing"))


def test_maximal_intersecting_counts():
    assert [count_families(n, "maximal-intersecting") for n in range(1, 6)] == [1, 2, 4, 12, 81]
    got = set(enumerate_families(3, "maximal-intersecting"))
    assert got == {principal(3, 1), principal(3, 2), principal(3, 3), majority(3)}


@pytest.mark.parametrize("n", range(1, 6))
def test_maximal_intersecting_balanced(n):
    fams = list(enumerate_families(n, "maximal-intersecting"))
    assert all(F.measure() == Fraction(1, 2) and F.is_increasing and F.is_antipodal for F in fams)
    filtered = [F for F in enumerate_families(n) if F.is_antipodal]
    assert len(filtered) == len(fams)


def test_increasing_intersecting_filter():
    fams = list(enumerate_families(3, "increasing-intersecting"))
    assert all(F.is_intersecting and F.is_increasing for F in fams)
    brute = [F for F in enumerate_families(3) if oracles.is_intersecting(oracles.to_sets(F))]
    assert fams == brute


def test_enumeration_order_and_cursor():
    cur = enumerate_families(4)
    bits = [F.bits for F in cur]
    assert bits == sorted(bits)
    assert cur.position == 168
    with pytest.raises(ResourceLimit):
        enumerate_families(7)
    with pytest.raises(ValueError):
        enumerate_families(3, "bogus")


@pytest.mark.slow
def test_dedekind_six_streams():
    assert count_families(6) == 7828354


def test_random_increasing():
    assert random_increasing(4, 1, k=0) == SetFamily.empty(4)
    assert SetFamily.up_closure(3, [0]) == SetFamily.full(3)
    assert SetFamily.up_closure(3, [0b001, 0b110]).count == 5
    for seed in range(30):
        for model in ("generators", "threshold"):
            F = random_increasing(6, seed, model)
            assert F.is_increasing
            assert F == random_increasing(6, seed, model)


def test_random_maximal_intersecting():
    for seed in range(20):
        F = random_maximal_intersecting(7, seed)
        assert F.is_increasing and F.is_antipodal


def test_lift_examples():
    M = majority(3)
    A2, B2, f = lift_pair(M, M)
    assert correlation(A2, B2) == correlation(M, M) / 2 == Fraction(1, 8)
    full = SetFamily.full(3)
    A2, _, _ = lift_pair(full, M)
    assert A2 == SetFamily.full(4) and influence(A2, 1) == 0
    with pytest.raises(ClassViolation):
        lift_pair(SetFamily.from_masks(3, [1]), M)


def _check_lift(A, B):
    A2, B2, f = lift_pair(A, B)
    n = A2.n
    assert correlation(A2, B2) == correlation(A, B) / 2
    assert influence(A2, 1) == 0
    for i in range(2, n + 1):
        assert influence(A2, i) == influence(A, i - 1)
    vals = f.to_fractions()
    full = (1 << n) - 1
    for m in range(1 << n):
        if m & 1:
            assert vals[m] == (1 if (m >> 1) in B else 0)
        assert vals[m] == -vals[full ^ m]
    fs, bs = wht(f), B.spectrum
    for s in range(1 << (n - 1)):
        # odd |S| pairs with f^(S); even |S| with -f^(S + {1})
        want = fs[s << 1] if bin(s).count("1") % 2 else -fs[(s << 1) | 1]
        assert bs[s] == want


def test_lift_postconditions_random():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 5)
        A = random_increasing(n, rng.getrandbits(32))
        B = random_maximal_intersecting(n, rng.getrandbits(32))
        _check_lift(A, B)


def test_lift_spectrum_majority():
    _check_lift(majority(3), majority(3))
