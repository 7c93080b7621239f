import numpy as np
import pytest

from distortion_lab.adversarial import (FAMILIES, TIGHTNESS, TIGHTNESS_COMMITTEES, TWO_FAC_CASES,
                                        FamilySpec, check_indistinguishable, far_pair, far_pair_penalty,
                                        gen_2fac_lb, gen_3fac_lb, gen_query_lb, gen_tightness, generate,
                                        query_lb_gaps)
from distortion_lab.errors import BadInstance, BadParams, ShapeMismatch, UnknownName
from distortion_lab.exact import SC, brute_force_opt, evaluate, exact_opt
from distortion_lab.model import Instance, cost, derive_profile

D = 1000.0


def test_basic_gap_sequence():
    eps = 1e-3 / 6
    gaps = np.diff(gen_query_lb(6, D, eps).candidates)
    expected = [1, D**2, 1, D**2 + eps, 1, D**2 + 2 * eps, 1, D**2 + 3 * eps, 1]
    np.testing.assert_allclose(gaps, expected, rtol=0, atol=1e-6)
    assert query_lb_gaps(6, D, eps) == pytest.approx(expected, abs=1e-12)


def test_first_variant_gaps():
    base = query_lb_gaps(6, D)
    first = query_lb_gaps(6, D, j=1)
    assert first[0] == D + 1 and first[1:] == base[1:]


@pytest.mark.parametrize("j", [3, 4])
def test_variant_pair_opens_to_d_plus_one(j):
    gaps = query_lb_gaps(6, D, j=j)
    pair = j - 1 if j % 2 else j - 2  # 0-based index of c_j's unit gap
    assert gaps[pair] == D + 1
    assert np.diff(gen_query_lb(6, D, j=j).candidates)[pair] == pytest.approx(D + 1)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_variant_moves_only_its_candidate(k):
    base = gen_query_lb(k, D).distance_matrix()
    for j in range(1, 2 * k - 1):
        var = gen_query_lb(k, D, j=j).distance_matrix()
        changed = np.argwhere(~np.isclose(base, var, rtol=0, atol=1e-6))
        assert {int(c) for r, c in changed if r == c} <= {j - 1}
        assert all(j - 1 in (int(r), int(c)) for r, c in changed)


def test_query_lb_parameter_guards():
    with pytest.raises(BadParams):
        gen_query_lb(2)
    with pytest.raises(BadParams):
        gen_query_lb(4, D=20.0)
    with pytest.raises(BadParams):
        gen_query_lb(4, eps=0.5)
    with pytest.raises(BadParams):
        gen_query_lb(4, j=7)


def test_eps_family_indistinguishable_for_k3_only():
    ok, _ = check_indistinguishable([gen_query_lb(3, D, j=j) for j in range(5)])
    assert ok
    ok, witness = check_indistinguishable([gen_query_lb(4, D, j=j) for j in range(7)])
    # c_1 moves away from the voter on c_3, past c_5 which is only eps farther
    assert not ok and witness == (1, 2, 3)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_separated_family_indistinguishable(k):
    variants = [gen_query_lb(k, D, j=j, step=3 * D + 0.5) for j in range(2 * k - 1)]
    assert check_indistinguishable(variants) == (True, None)
    for j, inst in enumerate(variants):
        assert exact_opt(inst, k, SC)[1] == pytest.approx(k - 2, abs=1e-6)
        if j:
            assert far_pair_penalty(inst, k) >= D


def test_indistinguishability_witness_and_errors():
    base = gen_query_lb(4, D)
    x = base.candidates.copy()
    x[1:] += D - 1  # first pair gap 1 -> D
    other = Instance(x, x.copy())
    ok, witness = check_indistinguishable([base, other])
    assert not ok and witness[0] == 1
    assert check_indistinguishable([base]) == (True, None)
    with pytest.raises(ShapeMismatch):
        check_indistinguishable([base, gen_query_lb(3, D)])


def test_far_pair_penalty():
    assert far_pair(gen_query_lb(4, D, j=2)) == (0, 1)
    assert far_pair_penalty(gen_query_lb(4, D, j=2), 4) >= D
    assert far_pair_penalty(gen_query_lb(6, D, j=1), 6) >= D
    with pytest.raises(BadInstance):
        far_pair_penalty(gen_query_lb(4, D), 4)


def test_two_fac_groups():
    inst = gen_2fac_lb(3, case="ab")
    rows = [tuple(r) for r in derive_profile(inst).rankings.tolist()]
    assert [rows.count(r) for r in ((1, 2, 3, 0), (2, 3, 1, 0), (0, 1, 2, 3), (3, 2, 1, 0))] == [3, 3, 1, 1]


def test_two_fac_ab_distortion():
    t = 3
    rep = evaluate(gen_2fac_lb(t, case="ab", eps=1e-4), (0, 1))
    assert rep.dist_sc == pytest.approx(2 * t + 3, abs=1e-2)


def test_two_fac_bc_grows_with_x():
    d = [evaluate(gen_2fac_lb(2, x=x, case="bc"), (1, 2)).dist_sc for x in (10.0, 100.0, 1000.0)]
    assert d[0] < d[1] < d[2]


@pytest.mark.parametrize("case", TWO_FAC_CASES)
def test_every_pair_is_punished(case):
    t = 4
    inst = gen_2fac_lb(t, case=case)
    committee = tuple("abcd".index(ch) for ch in case)
    profile = derive_profile(inst).rankings
    assert np.array_equal(profile, derive_profile(gen_2fac_lb(t, case="ab")).rankings)
    assert evaluate(inst, committee).dist_sc >= (inst.n - 1) * (1 - 1e-3)


def test_two_fac_guards():
    with pytest.raises(BadParams):
        gen_2fac_lb(0)
    with pytest.raises(BadParams):
        gen_2fac_lb(1, case="ae")
    with pytest.raises(BadParams):
        gen_2fac_lb(1, x=1.0, y=2.0, z=1.0, case="bc")


def test_three_fac():
    inst = gen_3fac_lb(100)
    assert brute_force_opt(inst, 3, SC) == ((0, 1, 2), pytest.approx(1))
    for drop in (0, 1):
        committee = tuple(c for c in range(4) if c != drop)
        assert cost(inst, committee).social_cost >= 100
    with pytest.raises(BadParams):
        gen_3fac_lb(5)


def test_remark_instance_layout():
    inst = gen_tightness("greedy-remark", n=10, eps=1e-6)
    assert inst.candidates.tolist() == pytest.approx([0, 1, 2, 4, 8], abs=1e-5)
    assert inst.n == 10


def test_median_tight_optimum():
    inst = gen_tightness("median-tight", n=8, eps=1e-6)
    assert exact_opt(inst, 2, SC)[1] == pytest.approx(0.5 + 2e-6, abs=1e-9)


def test_two_of_three_instances_share_a_profile():
    names = ("two-of-three-lb-a", "two-of-three-lb-b", "two-of-three-lb-c")
    insts = [gen_tightness(n, eps=1e-3) for n in names]
    assert check_indistinguishable(insts)[0]
    for name, inst in zip(names, insts):
        assert evaluate(inst, TIGHTNESS_COMMITTEES[name]).dist_sc >= 3 - 1e-2


def test_unknown_names():
    with pytest.raises(UnknownName):
        gen_tightness("nope")
    with pytest.raises(UnknownName):
        generate("nope")


@pytest.mark.parametrize("family", FAMILIES)
def test_families_are_tie_free(family):
    inst = FamilySpec(family, {"k": 4}).build()
    derive_profile(inst)
    assert inst.name.startswith(family)


def test_greedy_remark_medianized():
    inst = gen_tightness("greedy-remark-medianized", n=10)
    assert inst.same_as(gen_tightness("greedy-remark", n=10).with_name(inst.name))
    assert "greedy-remark-medianized" in TIGHTNESS
