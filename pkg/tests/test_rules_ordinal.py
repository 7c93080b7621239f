import numpy as np
import pytest

from distortion_lab.adversarial import TIGHTNESS_COMMITTEES, gen_tightness
from distortion_lab.axis import CandidateAxis, clusters, recover_axis
from distortion_lab.errors import KOutOfRange, TooFewActive, UnknownName, WrongM
from distortion_lab.exact import evaluate
from distortion_lab.model import Instance, RankingProfile, derive_profile, random_instance
from distortion_lab.rules import (get_rule, prepare, rule_extremes, rule_median_clusters,
                                  rule_two_of_three, run_rule)


def ordinal_view(inst):
    p = derive_profile(inst)
    ax = recover_axis(p)
    return p, ax, clusters(p, ax)


def test_extremes_two_active():
    inst = Instance([0.0, 1.0, 4.0, 6.0], [1.2, 1.1, 3.9])
    assert rule_extremes(*ordinal_view(inst)).committee == (1, 2)


def test_extremes_tightness():
    inst = gen_tightness("extremes-tight", n=5)
    out = rule_extremes(*ordinal_view(inst))
    assert out.committee == (0, 2)
    assert evaluate(inst, out).sc_rule == pytest.approx(7, abs=1e-5)
    assert out.queries == {}


def test_too_few_active():
    inst = Instance([0.0, 1.0, 4.0], [1.2, 0.9])
    with pytest.raises(TooFewActive):
        rule_extremes(*ordinal_view(inst))
    with pytest.raises(TooFewActive):
        rule_median_clusters(*ordinal_view(inst))


def test_median_two_clusters():
    inst = Instance([0.0, 1.0, 4.0, 6.0], [1.2, 1.1, 3.9, 4.2])
    assert rule_median_clusters(*ordinal_view(inst)).committee == (1, 2)


def test_median_tightness():
    inst = gen_tightness("median-tight", n=8)
    out = rule_median_clusters(*ordinal_view(inst))
    assert out.committee == TIGHTNESS_COMMITTEES["median-tight"]
    assert evaluate(inst, out).sc_rule == pytest.approx(4.5, abs=1e-5)


def test_median_collision_takes_nearest_active():
    # every voter prefers the leftmost active candidate, both medians coincide
    inst = Instance([0.0, 1.0, 2.0, 9.0], [0.9, 1.1, 1.05, 1.9, 8.0])
    p, ax, t = ordinal_view(inst)
    out = rule_median_clusters(p, ax, t)
    assert len(out.committee) == 2


def test_bounds_on_random_instances():
    for seed in range(500):
        inst = random_instance(seed, int(3 + seed % 20), int(3 + seed % 9))
        p, ax, t = ordinal_view(inst)
        n = inst.n
        assert evaluate(inst, rule_extremes(p, ax, t)).dist_sc <= (2 * n - 2) * (1 + 1e-9)
        assert evaluate(inst, rule_median_clusters(p, ax, t)).dist_sc <= (n + 1) * (1 + 1e-9)


def _profile(rows):
    return RankingProfile(np.array(rows)), CandidateAxis((0, 1, 2))


def test_two_of_three_trace():
    p, ax = _profile([[0, 1, 2], [1, 2, 0], [2, 1, 0]])
    out = rule_two_of_three(p, ax)
    assert out.committee == (0, 1) and out.artifacts["steps"] == (0, 1)


def test_two_of_three_third_bullet():
    p, ax = _profile([[1, 2, 0]] * 4)
    out = rule_two_of_three(p, ax)
    assert out.committee == (0, 1)


def test_two_of_three_needs_three_candidates():
    inst = random_instance(0, 10, 4)
    e = prepare(inst)
    with pytest.raises(WrongM):
        rule_two_of_three(e.profile, e.axis)


def test_two_of_three_random():
    for seed in range(1000):
        inst = random_instance(seed, 3 + seed % 12, 3)
        p, ax, _ = ordinal_view(inst)
        assert evaluate(inst, rule_two_of_three(p, ax)).dist_sc <= 3 * (1 + 1e-9)


def test_registry():
    with pytest.raises(UnknownName):
        get_rule("borda")
    e = prepare(gen_tightness("median-tight"))
    with pytest.raises(KOutOfRange):
        run_rule("median2", e, 3)
    assert run_rule("median2", e, 2).committee == (0, 2)


def test_rules_are_deterministic():
    inst = random_instance(12, 30, 9, active_only=True)
    for rule, k in (("extremes2", None), ("median2", None), ("greedy", 4), ("full-axis-dp", 4), ("coreset", 4)):
        assert run_rule(rule, prepare(inst), k).committee == run_rule(rule, prepare(inst), k).committee
