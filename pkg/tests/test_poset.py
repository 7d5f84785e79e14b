"""Weighted conditions: weights, scores, validation, extension, certificates."""

import random
from fractions import Fraction

import pytest

from forcing_lab import (
    ClopenPlaneSet,
    Condition,
    NullSet,
    ScheduledCover,
    ScoreTooLow,
    SearchExhausted,
    TaggedWeight,
    WeightFunction,
    attach_weight,
    avoid_null,
    certificate,
    eval_phi,
    extend,
    extend_detailed,
    generic_run,
    merge_same_stem,
    phi_from_clopen,
    score,
    sigma_centered_index,
    trivial_condition,
    validate,
)

FULL_W = WeightFunction.full()


def simple_condition(eps=Fraction(1, 2)):
    return attach_weight(trivial_condition(), eps, FULL_W)


# ---------------------------------------------------------------- weights

def test_weight_table_validation():
    with pytest.raises(ValueError):  # off-resolution key
        WeightFunction((1, 0), {("", ""): Fraction(1)})
    with pytest.raises(ValueError):  # exceeds the dyadic cap
        WeightFunction((1, 1), {("0", "0"): Fraction(1, 2)})
    with pytest.raises(ValueError):  # no mass at all
        WeightFunction.from_table((0, 0), {("", ""): 0})


def test_eval_phi_full():
    assert eval_phi(FULL_W, "", "") == 1
    assert eval_phi(FULL_W, "01", "1") == Fraction(1, 8)


def test_eval_phi_scaled_uniform():
    phi = WeightFunction.scaled_uniform(Fraction(3, 4), (1, 1))
    assert phi.total() == Fraction(3, 4)
    assert eval_phi(phi, "", "") == Fraction(3, 4)
    assert eval_phi(phi, "0", "") == Fraction(3, 8)
    assert eval_phi(phi, "01", "1") == Fraction(3, 4) / 8


def test_phi_from_clopen_matches_overlap():
    f = ClopenPlaneSet.from_rects([("0", "00")]).complement()
    phi = phi_from_clopen(f)
    for s, t in [("", ""), ("0", "0"), ("0", "00"), ("1", ""), ("00", "000")]:
        assert eval_phi(phi, s, t) == f.rect_overlap_measure(s, t)
    with pytest.raises(NullSet):
        phi_from_clopen(ClopenPlaneSet.empty((1, 1)))


def test_score_of_full_weight_is_one():
    h = {"": "1", "0": "10", "1": "11"}
    assert score(h, FULL_W) == 1


def test_score_grouped_matches_direct():
    rng = random.Random(4)
    phi = WeightFunction.scaled_uniform(Fraction(5, 8), (2, 1))
    h = {"": ""}
    for level in range(4):
        for s in [k for k in list(h) if len(k) == level]:
            for b in "01":
                h[s + b] = h[s] + (b if rng.random() < 0.5 else "")
    tops = [s for s in h if len(s) == 4]
    direct = sum((2 ** len(h[s]) * eval_phi(phi, s, h[s]) for s in tops), Fraction(0))
    assert score(h, phi) == direct


# ------------------------------------------------------------- validation

def test_validate_reports_epsilon_range():
    p = Condition(0, {"": ""}, (TaggedWeight(Fraction(1), FULL_W),))
    rep = validate(p)
    assert not rep.ok
    assert rep.first.clause == "epsilon"
    assert "1" in rep.first.detail


def test_validate_reports_low_score():
    phi = WeightFunction.scaled_uniform(Fraction(1, 2))
    p = Condition(0, {"": ""}, (TaggedWeight(Fraction(3, 4), phi),))
    rep = validate(p)
    assert [v.clause for v in rep.violations] == ["score"]


def test_validate_reports_domain_gaps():
    rep = validate(Condition(1, {"": "", "0": ""}, ()))
    assert not rep.ok
    assert rep.first.clause == "domain"


def test_validate_reports_monotonicity():
    rep = validate(Condition(1, {"": "1", "0": "0", "1": "11"}, ()))
    assert not rep.ok
    assert rep.first.clause == "monotone"


def test_attach_weight_guards():
    p = trivial_condition()
    with pytest.raises(ValueError):
        attach_weight(p, Fraction(1), FULL_W)
    with pytest.raises(ScoreTooLow):
        attach_weight(p, Fraction(3, 4), WeightFunction.scaled_uniform(Fraction(1, 2)))


# -------------------------------------------------------------- extension

def test_extend_without_weights_grows_one_level():
    q, stats = extend_detailed(trivial_condition(), seed=1)
    assert q.m == 1 and stats.m_prime == 1
    assert q.h == {"": "", "0": "0", "1": "0"}


def test_extend_structure_and_determinism():
    p = simple_condition()
    q1 = extend(p, seed=5)
    q2 = extend(p, seed=5)
    assert q1 == q2
    assert q1.m == 8  # slack 1/2 and stem sum 2 pin depth 8
    assert validate(q1).ok
    for s in p.h:
        assert q1.h[s] == p.h[s]
    for t in (t for t in q1.h if len(t) == q1.m):
        base = p.h[t[: p.m]]
        assert len(q1.h[t]) == len(base) + 1
        assert q1.h[t].startswith(base)
    assert extend(p, seed=6) != q1  # another seed lands elsewhere


def test_extend_respects_level_cap():
    p = simple_condition()
    q, stats = extend_detailed(p, seed=5, max_new_levels=2)
    assert q.m == 2
    assert stats.pinned_m_prime == 8
    assert stats.m_prime == 2
    assert validate(q).ok


def test_extend_exhaustive_fallback():
    p = simple_condition()
    q, stats = extend_detailed(p, seed=5, retry_cap=0, max_new_levels=2)
    assert stats.exhaustive_stems == [""]
    assert validate(q).ok


def test_extend_search_exhausted_without_fallback():
    p = simple_condition()
    with pytest.raises(SearchExhausted):
        extend_detailed(p, seed=5, retry_cap=0, exhaustive_cap=0, max_new_levels=2)


def test_extend_refuses_unmaterializable_depth():
    p = simple_condition(eps=Fraction(2 ** 40 - 1, 2 ** 40))  # sliver of slack
    with pytest.raises(ValueError):
        extend(p, seed=1)
    q = extend(p, seed=1, max_new_levels=2)  # capped growth still fine
    assert q.m == 2


def test_extend_rejects_invalid_input():
    bad = Condition(0, {"": ""}, (TaggedWeight(Fraction(1), FULL_W),))
    with pytest.raises(ValueError):
        extend(bad, seed=3)


# ----------------------------------------------- covers and certificates

def test_avoid_null_attaches_complement_weight():
    g = ClopenPlaneSet.from_rects([("0", "00")])
    p = avoid_null(trivial_condition(), g, Fraction(1, 4))
    assert len(p.u) == 1
    assert p.u[0].eps == Fraction(3, 4)
    assert p.u[0].phi.total() == Fraction(7, 8)


def test_avoid_null_rejects_full_cover():
    with pytest.raises(NullSet):
        avoid_null(trivial_condition(), ClopenPlaneSet.full((1, 1)), Fraction(1, 2))


def test_certificate_agrees_at_full_depth():
    f = ClopenPlaneSet.from_rects([("0", "00"), ("1", "01")])
    p = Condition(1, {"": "", "0": "00", "1": "01"}, ())
    cert = certificate(p, f)
    assert cert.inside == 1
    assert cert.score_f == 1


def test_certificate_reads_partial_overlap():
    f = ClopenPlaneSet.from_rects([("0", "00")]).complement()
    p = trivial_condition()
    cert = certificate(p, f)
    assert cert.inside == 0  # the whole-space rectangle is not inside f
    assert cert.score_f == Fraction(7, 8)


def test_generic_run_trace_and_invariants():
    g = ClopenPlaneSet.from_rects([("0", "00")])
    p, trace = generic_run([(g, Fraction(1, 4))], steps=2, seed=2026)
    assert p.m == 6
    assert [e.action for e in trace] == ["attach", "extend", "extend"]
    assert [e.depth for e in trace] == [0, 3, 6]
    floor = Fraction(3, 4)
    for entry in trace:
        for _, cert in entry.certificates:
            assert cert.score_f > floor
    final = trace[-1].certificates[0][1]
    assert final.inside == final.score_f  # depth 6 resolves the (1,2) cover


def test_generic_run_rejects_late_cover():
    g = ClopenPlaneSet.from_rects([("0", "0")])
    with pytest.raises(ValueError):
        generic_run([ScheduledCover(g, Fraction(1, 2), 5)], steps=2, seed=1)


def test_generic_run_error_carries_step():
    full_cover = ClopenPlaneSet.full((1, 1))
    with pytest.raises(NullSet) as info:
        generic_run([(full_cover, Fraction(1, 2))], steps=1, seed=1)
    assert info.value.step == 0


# ------------------------------------------------------------ centeredness

def test_sigma_centered_index_example():
    p = simple_condition()  # one weight, eps 1/2, total and score 1
    idx = sigma_centered_index(p)
    assert idx.size == 1
    assert idx.k == 2  # least k with 1/k at most the 1/2 slack
    assert idx.tags == (Fraction(1, 2),)


def test_same_index_conditions_merge():
    h = {"": "", "0": "0", "1": ""}
    u1 = (TaggedWeight(Fraction(1, 4), WeightFunction.scaled_uniform(Fraction(1, 2), (0, 1))),)
    u2 = (TaggedWeight(Fraction(1, 4), WeightFunction.scaled_uniform(Fraction(1, 2), (1, 1))),)
    p1, p2 = Condition(1, h, u1), Condition(1, h, u2)
    assert sigma_centered_index(p1) == sigma_centered_index(p2)
    merged = merge_same_stem(p1, p2)
    assert validate(merged).ok
    assert len(merged.u) == 2


def test_merge_requires_shared_stem():
    p1 = Condition(1, {"": "", "0": "0", "1": ""}, ())
    p2 = Condition(1, {"": "", "0": "1", "1": ""}, ())
    with pytest.raises(ValueError):
        merge_same_stem(p1, p2)
