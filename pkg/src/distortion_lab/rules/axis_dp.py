"""Optimal committee of the candidate-restricted instance with all gaps queried."""

from __future__ import annotations

from ..axis import CandidateAxis, ClusterTable, candidate_restrict
from ..errors import KOutOfRange
from ..exact import Objective, dp_opt_line
from ..model import RankingProfile
from ..oracle import DistanceOracle
from .base import RuleOutput, finish
from .greedy import _require_all_active

MODES = ("candidate", "regular")


def axis_gaps(axis: CandidateAxis, oracle: DistanceOracle, mode: str = "candidate") -> list:
    """Distances between consecutive candidates on the axis.

    ``candidate`` mode asks ``m - 1`` candidate queries.  ``regular`` mode
    locates the probe voter of the leftmost candidate relative to it through
    one candidate-query simulation between the extremes, then reads every
    gap off that voter's distances, for at most ``m + 3`` regular queries.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    order = axis.order
    if mode == "candidate":
        return [oracle.candidate_query(a, b) for a, b in zip(order, order[1:])]
    if len(order) == 2:
        return [oracle.probe_pair(order[0], order[1]).distance]
    probe = oracle.probe_pair(order[0], order[-1])
    v = probe.voter
    d = [oracle.regular_query(v, c) for c in order]
    first = d[1] - d[0] if probe.voter_left_of_candidate else d[0] + d[1]
    return [first] + [d[i] - d[i - 1] for i in range(2, len(order))]


def rule_full_axis_dp(profile: RankingProfile, axis: CandidateAxis, table: ClusterTable,
                      oracle: DistanceOracle, k: int, mode: str = "candidate",
                      objective: Objective = Objective.SocialCost) -> RuleOutput:
    """Query every consecutive gap and solve the restricted instance exactly."""
    m = len(axis)
    if not 1 <= k <= m - 1:
        raise KOutOfRange(f"k={k} must satisfy 1 <= k <= m - 1 = {m - 1}")
    _require_all_active(axis, table)
    gaps = axis_gaps(axis, oracle, mode)
    restricted = candidate_restrict(profile, axis, axis.order, gaps)
    committee, value = dp_opt_line(restricted, k, objective)
    return finish("full-axis-dp", committee, oracle, gaps=tuple(gaps), mode=mode,
                  restricted_cost=value)
