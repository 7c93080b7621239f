"""Committee election rules and their registry.

Every rule sees only the ranking profile, the candidate axis, the cluster
table and (for query-based rules) a :class:`~distortion_lab.oracle.DistanceOracle`.
"""

from __future__ import annotations

from ..errors import KOutOfRange, UnknownName
from .axis_dp import axis_gaps, rule_full_axis_dp
from .base import Election, RuleOutput, prepare
from .coreset import Interval, good_set, interval_cap, partition_interval, query_ceiling, rule_coreset
from .greedy import Farthest, distant_candidate, rule_greedy
from .ordinal import rule_extremes, rule_median_clusters, rule_two_of_three


def _fixed_k(name, k_required):
    def check(k):
        if k is not None and k != k_required:
            raise KOutOfRange(f"{name} elects exactly {k_required} candidates, got k={k}")
    return check


def _run_extremes(e: Election, k=None, **_):
    _fixed_k("extremes2", 2)(k)
    return rule_extremes(e.profile, e.axis, e.clusters)


def _run_median(e: Election, k=None, **_):
    _fixed_k("median2", 2)(k)
    return rule_median_clusters(e.profile, e.axis, e.clusters)


def _run_two_of_three(e: Election, k=None, **_):
    _fixed_k("two-of-three", 2)(k)
    return rule_two_of_three(e.profile, e.axis)


def _run_greedy(e: Election, k, **_):
    return rule_greedy(e.profile, e.axis, e.clusters, e.oracle, k)


def _run_full_axis_dp(e: Election, k, mode="candidate", **_):
    return rule_full_axis_dp(e.profile, e.axis, e.clusters, e.oracle, k, mode=mode)


def _run_coreset(e: Election, k, **_):
    return rule_coreset(e.profile, e.axis, e.clusters, e.oracle, k)


RULES = {
    "extremes2": _run_extremes,
    "median2": _run_median,
    "two-of-three": _run_two_of_three,
    "greedy": _run_greedy,
    "full-axis-dp": _run_full_axis_dp,
    "coreset": _run_coreset,
}


def get_rule(name: str):
    """Look up a rule runner ``f(election, k, **options) -> RuleOutput``."""
    try:
        return RULES[name]
    except KeyError:
        raise UnknownName(f"unknown rule {name!r}; known: {', '.join(RULES)}") from None


def run_rule(name: str, election: Election, k=None, **options) -> RuleOutput:
    return get_rule(name)(election, k, **options)


__all__ = [
    "Election", "Farthest", "Interval", "RULES", "RuleOutput", "axis_gaps", "distant_candidate",
    "get_rule", "good_set", "interval_cap", "partition_interval", "prepare", "query_ceiling",
    "rule_coreset", "rule_extremes", "rule_full_axis_dp", "rule_greedy", "rule_median_clusters",
    "rule_two_of_three", "run_rule",
]
