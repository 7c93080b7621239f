import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import instances
from distortion_lab.adversarial import gen_3fac_lb, gen_query_lb, gen_tightness
from distortion_lab.axis import WeightedLineInstance
from distortion_lab.errors import KTooLarge, TooLarge
from distortion_lab.exact import (EC, SC, brute_force_opt, distortion, dp_opt_line, evaluate, exact_opt,
                                  reference_greedy, weighted_cost)
from distortion_lab.model import Instance, cost, random_instance


def unit_line(inst):
    return WeightedLineInstance(tuple(range(inst.m)), (1,) * inst.m, tuple(np.diff(inst.candidates)))


def test_brute_force_small():
    committee, value = brute_force_opt(Instance([0, 1, 5], [0, 1, 5]), 2)
    assert value == 1 and committee == (0, 2)


def test_brute_force_three_member_lower_bound():
    committee, value = brute_force_opt(gen_3fac_lb(100), 3)
    assert committee == (0, 1, 2) and value == pytest.approx(1)


def test_brute_force_zero_cost():
    assert brute_force_opt(Instance([0, 1, 2, 3], [1, 3, 3]), 2)[1] == 0


def test_brute_force_limits():
    with pytest.raises(TooLarge):
        brute_force_opt(random_instance(0, 5, 20), 3)
    with pytest.raises(KTooLarge):
        brute_force_opt(Instance([0, 1], [0]), 3)


def test_dp_k_equals_points():
    w = WeightedLineInstance((0, 1, 2), (2, 1, 3), (1.0, 4.0))
    assert dp_opt_line(w, 3)[1] == 0
    with pytest.raises(KTooLarge):
        dp_opt_line(w, 4)


@pytest.mark.parametrize("j", range(11))
def test_dp_on_query_lower_bound(j):
    inst = gen_query_lb(6, 1000.0, 1e-3, j)
    assert dp_opt_line(unit_line(inst), 6, SC)[1] == pytest.approx(4, abs=1e-9)
    assert dp_opt_line(unit_line(inst), 6, EC)[1] == pytest.approx(1, abs=1e-9)


def test_dp_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(500):
        F = int(rng.integers(2, 13))
        k = int(rng.integers(1, min(5, F) + 1))
        w = WeightedLineInstance(tuple(range(F)), tuple(rng.integers(1, 6, F)), tuple(rng.uniform(0.1, 10, F - 1)))
        inst = w.to_instance()
        for obj in (SC, EC):
            ids, val = dp_opt_line(w, k, obj)
            assert val == pytest.approx(brute_force_opt(inst, k, obj)[1], rel=1e-12, abs=1e-12)
            assert weighted_cost(w, [w.ids.index(i) for i in ids], obj) == pytest.approx(val)


def test_exact_opt_matches_brute_force_with_free_voters():
    for seed in range(100):
        inst = random_instance(seed, 15, 9)
        for k in (1, 2, 4):
            for obj in (SC, EC):
                assert exact_opt(inst, k, obj)[1] == pytest.approx(brute_force_opt(inst, k, obj)[1], abs=1e-9)


def test_exact_opt_on_subset():
    inst = random_instance(3, 20, 10)
    sub = (0, 4, 7, 9)
    committee, value = exact_opt(inst, 2, SC, subset=sub)
    assert set(committee) <= set(sub)
    _, bf = brute_force_opt(Instance(inst.candidates[list(sub)], inst.voters), 2, SC)
    assert value == pytest.approx(bf)


def test_distortion_zero_convention():
    assert distortion(0.0, 0.0) == 1.0
    assert math.isinf(distortion(1.0, 0.0))
    assert distortion(6.0, 2.0) == 3.0


def test_evaluate_optimum_has_distortion_one():
    inst = random_instance(4, 12, 6)
    committee, _ = brute_force_opt(inst, 3, SC)
    assert evaluate(inst, committee).dist_sc == pytest.approx(1.0)


def test_extremes_tightness_at_eps_zero():
    inst = gen_tightness("extremes-tight", n=5, eps=0.0)
    rep = evaluate(inst, (0, 2))
    assert rep.sc_rule == pytest.approx(7) and rep.sc_opt == pytest.approx(1)
    assert rep.dist_sc == pytest.approx(2 * 5 - 3)


def test_median_tightness():
    inst = gen_tightness("median-tight", n=8, eps=1e-6)
    rep = evaluate(inst, (0, 2))
    assert rep.sc_opt == pytest.approx(0.5 + 2e-6, abs=1e-9)
    assert rep.dist_sc == pytest.approx(9, abs=1e-4)


def test_reference_greedy_on_remark():
    assert sorted(reference_greedy(gen_tightness("greedy-remark", n=10), 3)) == [0, 3, 4]


@given(instances(m_max=10))
def test_optimum_monotone_in_k(inst):
    prev_sc = prev_ec = math.inf
    for k in range(1, inst.m + 1):
        sc, ec = exact_opt(inst, k, SC)[1], exact_opt(inst, k, EC)[1]
        assert sc <= prev_sc + 1e-9 and ec <= prev_ec + 1e-9
        prev_sc, prev_ec = sc, ec


@given(instances(m_max=10), st.data())
def test_distortion_at_least_one(inst, data):
    k = data.draw(st.integers(1, inst.m))
    committee = data.draw(st.sets(st.integers(0, inst.m - 1), min_size=k, max_size=k))
    rep = evaluate(inst, committee)
    if rep.sc_opt > 0:
        assert rep.dist_sc >= 1 - 1e-12
    assert rep.sc_rule == pytest.approx(cost(inst, committee).social_cost)


def test_evaluate_reads_queries_from_rule_output():
    from distortion_lab.adversarial import gen_tightness
    from distortion_lab.rules import prepare, run_rule

    inst = gen_tightness("greedy-remark", n=10)
    e = prepare(inst)
    out = run_rule("greedy", e, 3)
    rep = evaluate(inst, out)
    assert rep.q_candidate == e.oracle.ledger.counts["candidate"] > 0
    assert rep.q_gross_regular_equiv == e.oracle.ledger.gross_regular_equiv
