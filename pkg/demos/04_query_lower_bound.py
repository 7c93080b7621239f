"""
Hidden far pairs and indistinguishable profiles
===============================================

Candidates come in tight pairs separated by huge gaps.  Each variant pulls
one candidate away from its partner.  A rule that cannot tell the variants
apart must query before it knows which pair to split.
"""

from distortion_lab.adversarial import check_indistinguishable, far_pair_penalty, gen_query_lb
from distortion_lab.exact import SC, exact_opt
from distortion_lab.harness.suites import SEPARATED_STEP

k, D = 4, 1000.0
basic = gen_query_lb(k, D)
print("basic gaps:", [round(float(g), 6) for g in basic.candidates[1:] - basic.candidates[:-1]])

variant = gen_query_lb(k, D, j=3)
print("variant 3 gaps:", [round(float(g), 6) for g in variant.candidates[1:] - variant.candidates[:-1]])
print("optimal social cost:", round(exact_opt(variant, k, SC)[1], 9))
print("best committee missing the far pair costs at least", round(far_pair_penalty(variant, k), 3))

# with separators growing by eps, a moved candidate overtakes the next pair
variants = [gen_query_lb(k, D, j=j) for j in range(2 * k - 1)]
print("eps separators, same profile:", check_indistinguishable(variants))

# separators growing by about 3D keep every ranking in place
variants = [gen_query_lb(k, D, j=j, step=SEPARATED_STEP) for j in range(2 * k - 1)]
print("wide separators, same profile:", check_indistinguishable(variants))
