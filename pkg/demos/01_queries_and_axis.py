"""
Rankings, the recovered axis and metered distance queries
=========================================================

A random instance hides voter and candidate positions on the line.  The
rules only see rankings, plus whatever distances they pay for.
"""

import numpy as np

from distortion_lab import prepare, random_instance

# twelve voters and six candidates; every candidate is somebody's favourite
inst = random_instance(seed=3, n=12, m=6, placement="uniform", active_only=True)
print("hidden candidate positions:", np.round(inst.candidates, 3))

# prepare() derives the ranking profile and recovers the candidate axis from it
election = prepare(inst)
print("first voter ranks:", election.profile.rankings[0].tolist())
print("recovered axis:   ", list(election.axis.order))

# a candidate query is simulated with a few regular (voter, candidate) queries
oracle = election.oracle
left, right = election.axis.order[0], election.axis.order[-1]
span = oracle.candidate_query(left, right)
print(f"distance between the axis ends: {span:.6f}")
print("true distance:                 ", round(abs(inst.candidates[right] - inst.candidates[left]), 6))

# voter queries cost at most two regular queries
print(f"distance between voters 0 and 1: {oracle.voter_query(0, 1):.6f}")

# the ledger keeps top-level counts and the regular queries spent on simulations
print("ledger:", oracle.ledger.snapshot())
