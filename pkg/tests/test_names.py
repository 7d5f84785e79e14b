"""Names, slaloms, and measure-positive refinement."""

from fractions import Fraction

import pytest

from forcing_lab import (
    EMPTY,
    FULL,
    ClopenSet,
    EmptyCondition,
    SlalomViolation,
    boolean_value,
    eventually_different,
    heavy_values,
    infinitely_equal_hits,
    make_name,
    refine_condition,
    slalom_extract,
)
from forcing_lab.names import NonpositiveThreshold, NotAPartition


def halves(lo=0, hi=1):
    return [(lo, ClopenSet.from_strings(["0"])), (hi, ClopenSet.from_strings(["1"]))]


def cell_and_rest(label, rest_label, gen):
    cell = ClopenSet.from_strings([gen])
    return [(label, cell), (rest_label, cell.complement())]


def test_make_name_validates_partitions():
    g = make_name([halves(), halves(3, 4)])
    assert g.horizon == 2
    with pytest.raises(NotAPartition):  # overlap
        make_name([[(0, FULL), (1, ClopenSet.from_strings(["1"]))]])
    with pytest.raises(NotAPartition):  # gap
        make_name([[(0, ClopenSet.from_strings(["0"]))]])
    with pytest.raises(NotAPartition):  # duplicate labels
        make_name([[(0, ClopenSet.from_strings(["0"])),
                    (0, ClopenSet.from_strings(["1"]))]])


def test_boolean_value():
    g = make_name([halves()])
    assert boolean_value(g, 0, 0) == ClopenSet.from_strings(["0"])
    assert boolean_value(g, 0, 99) == EMPTY


def test_slalom_extract_threshold_is_strict():
    # at n=3 the threshold is 1/16: a cell of exactly 1/16 stays out
    g = make_name([halves(), halves(), halves(), cell_and_rest(5, 6, "0000")])
    s = slalom_extract(g)
    assert s.slots[0] == frozenset()  # threshold 1 at n=0
    assert s.slots[1] == {0, 1}
    assert s.slots[3] == {6}
    assert all(len(s.slots[n]) < (n + 1) ** 2 for n in range(4))


def test_heavy_values():
    assert heavy_values(halves(), Fraction(1, 3)) == {0, 1}
    assert heavy_values(halves(), Fraction(1, 2)) == set()
    with pytest.raises(NonpositiveThreshold):
        heavy_values(halves(), Fraction(0))


def test_refine_exact_measure():
    # three pairwise disjoint value cells of measures 1/16, 1/32, 1/64
    g = make_name([
        halves(), halves(), halves(),
        cell_and_rest(0, 7, "0000"),
        cell_and_rest(0, 7, "00010"),
        cell_and_rest(0, 7, "000110"),
    ])
    f = [99, 99, 99, 0, 0, 0]
    q, n = refine_condition(FULL, g, f, start=1)
    assert n == 3
    assert q.measure() == Fraction(57, 64)
    for k in range(n, 6):
        assert q.intersect(boolean_value(g, k, f[k])).is_empty()


def test_refine_cutoff_scales_with_measure():
    g = make_name([halves() for _ in range(8)])
    p = ClopenSet.from_strings(["00"])  # measure 1/4
    q, n = refine_condition(p, g, [99] * 8, start=1)
    # least n above 1 with 1/(n-1) < 1/4 is 6
    assert n == 6
    assert q == p  # absent labels have empty value cells


def test_refine_rejects_slalom_values():
    g = make_name([halves(), halves()])
    with pytest.raises(SlalomViolation) as info:
        refine_condition(FULL, g, [99, 1], start=1)
    assert info.value.coordinate == 1
    assert info.value.label == 1


def test_refine_start_shields_early_coordinates():
    g = make_name([halves(), halves(), halves()])
    q, n = refine_condition(FULL, g, [0, 99, 99], start=1)  # f(0) heavy but shielded
    assert n == 3
    assert q == FULL


def test_refine_requires_positive_measure():
    g = make_name([halves()])
    with pytest.raises(EmptyCondition):
        refine_condition(EMPTY, g, [0], start=0)


def test_refine_requires_full_length_function():
    g = make_name([halves(), halves()])
    with pytest.raises(ValueError):
        refine_condition(FULL, g, [0], start=0)


def test_eventually_different():
    assert eventually_different([1, 2, 3], [4, 5, 6])
    assert not eventually_different([1, 2, 3], [9, 2, 9])
    assert eventually_different([1, 2, 3], [1, 9, 9], start=1)


def test_infinitely_equal_hits():
    g = make_name([halves(), halves(), halves()])
    s = slalom_extract(g)
    assert infinitely_equal_hits([0, 0, 0], s) == {1, 2}  # slot 0 is empty
    assert infinitely_equal_hits([9, 9, 9], s) == set()
