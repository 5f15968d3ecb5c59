import math
import random
from fractions import Fraction

import pytest

from hypercorr.cube import SetFamily
from hypercorr.errors import ClassViolation, ResourceLimit
from hypercorr.families import TribesParams, enumerate_families, majority, principal, tribes
from hypercorr.inequalities import evaluate
from hypercorr.search import (
    ScanSpec,
    balance_tribe_count,
    class_members,
    local_search,
    maximal_non_elements,
    minimal_elements,
    sample_family,
    scan,
    tribes_sweep,
)
from hypercorr.serialize import dumps, to_jsonable


def test_exhaustive_chvatal_n4():
    rec = scan(ScanSpec(4, "increasing", "maximal-intersecting", "chvatal_equiv"))
    assert rec.examined == 168 * 12
    assert rec.best == 0 and rec.hard_failures == 0
    A, B = rec.witness
    assert evaluate("chvatal_equiv", A, B).margin == 0


def test_exhaustive_balanced_c_n4():
    rec = scan(ScanSpec(4, "increasing", "increasing", "balanced_c", objective="min-ratio"))
    assert rec.best <= Fraction(136, 189)
    assert rec.best == Fraction(8, 15)
    restricted = scan(ScanSpec(4, "increasing", "balanced-increasing", "balanced_c", objective="min-ratio"))
    assert restricted.witness[1].is_balanced
    A, B = tribes(TribesParams(2, 2))
    assert evaluate("balanced_c", A, B).ratio == Fraction(136, 189)


def test_random_harris_scan():
    rec = scan(ScanSpec(8, "increasing", "increasing", "harris", budget=10_000, seed=5))
    assert rec.examined == 10_000 and rec.best >= 0 and rec.hard_failures == 0


def test_scan_reproducible_and_parallel_invariant():
    spec = ScanSpec(6, "increasing", "maximal-intersecting", "chvatal_equiv", budget=300, seed=11)
    a = dumps(to_jsonable(scan(spec)))
    b = dumps(to_jsonable(scan(spec)))
    assert a == b
    par = ScanSpec(6, "increasing", "maximal-intersecting", "chvatal_equiv", budget=300, seed=11, jobs=3)
    assert dumps(to_jsonable(scan(par))) == a
    ex = ScanSpec(4, "increasing", "increasing", "kms", objective="min-ratio")
    ex3 = ScanSpec(4, "increasing", "increasing", "kms", objective="min-ratio", jobs=3)
    assert dumps(to_jsonable(scan(ex))) == dumps(to_jsonable(scan(ex3)))


def test_witness_fidelity():
    for checker, obj in [("dream", "min-margin"), ("talagrand", "min-ratio"), ("diag_strong", "min-margin")]:
        rec = scan(ScanSpec(4, "increasing", "increasing", checker, objective=obj))
        rep = evaluate(checker, *rec.witness)
        assert (rep.margin if obj == "min-margin" else rep.ratio) == rec.best


def test_single_family_scan():
    rec = scan(ScanSpec(4, "any", None, "harper"))
    assert rec.examined == 1 << 16 and rec.hard_failures == 0


def test_scan_spec_validation():
    with pytest.raises(ResourceLimit):
        ScanSpec(7, "increasing", "increasing", "harris")
    with pytest.raises(ValueError):
        ScanSpec(3, "increasing", "increasing", "nope")
    with pytest.raises(ValueError):
        ScanSpec(3, "increasing", None, "harris")
    with pytest.raises(ValueError):
        ScanSpec(3, "increasing", "increasing", "harris", objective="max-fun")


def test_class_members():
    assert len(class_members(4, "increasing")) == 168
    assert len(class_members(4, "maximal-intersecting")) == 12
    assert all(SetFamily(4, b).is_balanced for b in class_members(4, "balanced-increasing"))


@pytest.mark.parametrize("cls", ["increasing", "decreasing", "increasing-intersecting",
                                 "maximal-intersecting", "balanced-increasing"])
def test_sampling_respects_class(cls):
    rng = random.Random(2)
    for n in (3, 7):
        for _ in range(10):
            F = sample_family(n, cls, rng)
            if cls == "decreasing":
                assert F.is_decreasing
            else:
                assert F.is_increasing
            if "intersecting" in cls:
                assert F.is_intersecting
            if cls in ("maximal-intersecting", "balanced-increasing"):
                assert F.is_balanced


def test_moves_keep_monotone():
    F = majority(5)
    for x in minimal_elements(F):
        assert SetFamily(5, F.bits & ~(1 << x)).is_increasing
    for x in maximal_non_elements(F):
        assert SetFamily(5, F.bits | (1 << x)).is_increasing
    assert minimal_elements(principal(3, 1)) == [1]
    assert maximal_non_elements(principal(3, 1)) == [6]


def test_local_search_examples():
    rec = local_search((majority(3), principal(3, 1)), "chvatal_equiv", budget=40, seed=1)
    assert rec.best == 0 and all(v == 0 for v in rec.trace)
    start = (SetFamily.full(3) - SetFamily.from_masks(3, [0]), majority(3))
    rec = local_search(start, "chvatal_equiv", budget=60, seed=2)
    assert all(v >= 0 for v in rec.trace)
    rec = local_search(start, "chvatal_equiv", budget=0)
    assert rec.witness == start and rec.trace == [evaluate("chvatal_equiv", *start).margin]


def test_local_search_monotone_and_deterministic():
    start = (majority(5), majority(5))
    a = local_search(start, "dream", budget=80, seed=9)
    b = local_search(start, "dream", budget=80, seed=9)
    assert a.trace == b.trace and a.witness == b.witness
    assert all(x >= y for x, y in zip(a.trace, a.trace[1:]))
    assert a.best < evaluate("dream", *start).margin


def test_local_search_rejects_bad_start():
    with pytest.raises(ClassViolation):
        local_search((SetFamily.from_masks(3, [1]), majority(3)), "harris")


def test_balance_tribe_count():
    assert balance_tribe_count(2) == 2
    assert balance_tribe_count(3) == 5
    assert balance_tribe_count(10) == 709
    for r in range(2, 12):
        m = balance_tribe_count(r)
        d = lambda k: abs((1 - Fraction(1, 2**r)) ** k - Fraction(1, 2))
        assert d(m) <= d(m - 1) and d(m) < d(m + 1)


def test_tribes_sweep_rows():
    rows = tribes_sweep([2, (3, 4), 10], "closed-form")
    assert rows[0].ratio_balanced == pytest.approx(136 / 189)
    assert rows[1].ratio_balanced == pytest.approx(0.6696, abs=1e-3)
    assert abs(rows[2].ratio_balanced - math.log(2)) < 0.02
    exact = tribes_sweep([2, (3, 4)], "exact")
    assert exact[0].ratio_balanced == Fraction(136, 189)
    assert exact[1].mode == "exact"
    beyond = tribes_sweep([(5, 5)], "exact")
    assert beyond[0].mode == "closed-form-exact"


def test_tribes_sweep_goes_below_070():
    rows = tribes_sweep(range(3, 16), "closed-form")
    assert min(r.ratio_balanced for r in rows) < 0.70
    tail = [abs(r.ratio_balanced - math.log(2)) for r in rows[-4:]]
    assert max(tail) < 0.01
