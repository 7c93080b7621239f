"""
Distortion and query use across rules
=====================================

A small sweep over random instances, summarised per rule.  The same table
can be written to CSV with ``distortion-lab sweep``.
"""

import numpy as np

from distortion_lab.harness import SweepConfig, run_sweep

config = SweepConfig(rules=("greedy", "coreset", "full-axis-dp"), k=(3, 6), n=(20, 80),
                     m=(10, 30), trials=60, seed=1)
rows, failures = run_sweep(config)
print(f"{len(rows)} runs, {len(failures)} broken guarantees")

print(f"{'rule':>14} {'mean SC dist':>13} {'max SC dist':>12} {'max EC dist':>12} {'mean cand q':>12}")
for rule in config.rules:
    mine = [r for r in rows if r["rule"] == rule]
    sc = np.array([r["dist_sc"] for r in mine])
    ec = np.array([r["dist_ec"] for r in mine])
    q = np.array([r["q_candidate"] for r in mine])
    print(f"{rule:>14} {sc.mean():13.4f} {sc.max():12.4f} {ec.max():12.4f} {q.mean():12.1f}")

# greedy is cheapest in queries, the axis DP asks for every consecutive gap
