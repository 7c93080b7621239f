"""Shared types for voting rules."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..axis import CandidateAxis, ClusterTable, clusters, recover_axis
from ..model import Instance, RankingProfile, derive_profile
from ..oracle import DistanceOracle


@dataclass
class RuleOutput:
    """Committee elected by a rule plus whatever it computed on the way.

    Attributes
    ----------
    committee : tuple of int
        Sorted candidate ids.
    artifacts : dict
        Rule-specific intermediate results (election order, partitions...).
    queries : dict
        Ledger counts consumed by this run.
    """

    rule: str
    committee: tuple
    artifacts: dict = field(default_factory=dict)
    queries: dict = field(default_factory=dict)


@dataclass
class Election:
    """The ordinal view of an instance plus a fresh metered oracle."""

    profile: RankingProfile
    axis: CandidateAxis
    clusters: ClusterTable
    oracle: DistanceOracle


def prepare(instance: Instance) -> Election:
    """Derive rankings, axis and clusters from ``instance`` and attach an oracle."""
    profile = derive_profile(instance)
    axis = recover_axis(profile)
    table = clusters(profile, axis)
    return Election(profile, axis, table, DistanceOracle(instance, axis, table))


def finish(rule: str, committee, oracle: DistanceOracle | None = None, **artifacts) -> RuleOutput:
    queries = oracle.ledger.snapshot() if oracle is not None else {}
    return RuleOutput(rule, tuple(sorted(int(c) for c in committee)), artifacts, queries)
