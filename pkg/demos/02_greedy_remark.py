"""
Greedy can be a factor three off
================================

Five candidates at 0, 1, 2, 4 and 8 with voters packed on the middle ones.
Greedy picks both axis ends, then the candidate farthest from them, and
misses the two crowded candidates.
"""

from distortion_lab import evaluate, prepare, run_rule
from distortion_lab.adversarial import gen_tightness

inst = gen_tightness("greedy-remark", n=10, eps=1e-6)
print("candidates:", inst.candidates.tolist())
print("voters:    ", inst.voters.tolist())

out = run_rule("greedy", prepare(inst), k=3)
report = evaluate(inst, out)
print("greedy elects", list(out.committee), "in order", list(out.artifacts["elected_order"]))
print(f"social cost {report.sc_rule:.6f} against the optimum {report.sc_opt:.6f}")
print(f"distortion {report.dist_sc:.6f}   (10/3 = {10 / 3:.6f})")
print("queries used: candidate", report.q_candidate, "regular", report.q_regular)

# the coreset rule spends more queries and lands on the optimum here
out = run_rule("coreset", prepare(inst), k=3)
report = evaluate(inst, out)
print("coreset elects", list(out.committee), f"with distortion {report.dist_sc:.6f}")
