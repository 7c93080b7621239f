"""Farthest-first committee selection with few candidate queries."""

from __future__ import annotations

from typing import NamedTuple

from ..axis import CandidateAxis, ClusterTable
from ..errors import InactiveCandidate, IntervalTooSmall, KOutOfRange
from ..model import RankingProfile
from ..oracle import DistanceOracle
from .base import RuleOutput, finish


class Farthest(NamedTuple):
    candidate: int
    distance: float


def _oriented(axis: CandidateAxis, lo: int, hi: int):
    if axis.pos(lo) > axis.pos(hi):
        lo, hi = hi, lo
    return lo, hi, axis.interval(lo, hi)


def straddle(lo: int, hi: int, profile: RankingProfile, axis: CandidateAxis, table: ClusterTable):
    """Scan right from ``lo`` for the first candidate whose probe voter prefers ``hi``.

    Returns ``(c_l, c_r)``: the scan stop ``c_r`` and its left neighbour.
    """
    members = axis.interval(lo, hi)
    for prev, c in zip(members, members[1:]):
        v = table.first(c)
        if profile.prefers(v, hi, lo):
            return prev, c
    raise AssertionError("the probe voter of the right endpoint always prefers it")


def _dist(oracle: DistanceOracle, c: int, d: int) -> float:
    return 0.0 if c == d else oracle.candidate_query(c, d)


def distant_candidate(lo: int, hi: int, profile: RankingProfile, axis: CandidateAxis,
                      table: ClusterTable, oracle: DistanceOracle) -> Farthest:
    """Candidate of the interval ``[lo, hi]`` farthest from both endpoints.

    Uses at most three candidate queries (two for a three-candidate interval).

    Raises
    ------
    IntervalTooSmall
        If the interval holds fewer than three candidates.
    """
    lo, hi, members = _oriented(axis, lo, hi)
    if len(members) < 3:
        raise IntervalTooSmall(f"interval has {len(members)} candidates; at least 3 needed")
    if len(members) == 3:
        mid = members[1]
        return Farthest(mid, min(_dist(oracle, mid, lo), _dist(oracle, mid, hi)))
    cl, cr = straddle(lo, hi, profile, axis, table)
    dl, dr = _dist(oracle, lo, cl), _dist(oracle, cr, hi)
    if dl >= dr:
        return Farthest(cl, min(dl, _dist(oracle, hi, cl)))
    return Farthest(cr, min(dr, _dist(oracle, cr, lo)))


def _require_all_active(axis, table):
    idle = [c for c in axis if not table.is_active(c)]
    if idle:
        raise InactiveCandidate(f"candidates {idle} have empty clusters")


def rule_greedy(profile: RankingProfile, axis: CandidateAxis, table: ClusterTable,
                oracle: DistanceOracle, k: int) -> RuleOutput:
    """Greedy k-center on the candidate axis driven by Distant-Candidate calls.

    Starts from both axis extremes.  A pool holds, for every gap between
    consecutive elected candidates that contains another candidate, the
    farthest candidate in that gap and its distance; the best pool entry is
    elected each round (ties to the leftmost gap) and its gap is refreshed
    with two new calls.

    Raises
    ------
    KOutOfRange
        Unless ``2 <= k <= m - 1``.
    InactiveCandidate
        If some candidate has an empty cluster.
    """
    m = len(axis)
    if not 2 <= k <= m - 1:
        raise KOutOfRange(f"k={k} must satisfy 2 <= k <= m - 1 = {m - 1}")
    _require_all_active(axis, table)
    order = [axis[0], axis[-1]]
    pool = {}  # (lo, hi) elected neighbours -> Farthest

    def refresh(lo, hi):
        if abs(axis.pos(hi) - axis.pos(lo)) >= 2:
            pool[(lo, hi)] = distant_candidate(lo, hi, profile, axis, table, oracle)

    if k > 2:
        refresh(axis[0], axis[-1])
    picks = []
    while len(order) < k:
        (lo, hi), best = max(pool.items(), key=lambda kv: (kv[1].distance, -axis.pos(kv[0][0])))
        del pool[(lo, hi)]
        order.append(best.candidate)
        picks.append((best.candidate, best.distance))
        if len(order) < k:
            refresh(lo, best.candidate)
            refresh(best.candidate, hi)
    return finish("greedy", order, oracle, elected_order=tuple(order), picks=tuple(picks))
