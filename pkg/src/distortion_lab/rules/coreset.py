"""Hierarchical partitioning of the axis into a small good set of candidates.

The greedy committee induces Voronoi cells on the axis.  The heaviest cell
(voter count times length) is repeatedly halved at its midpoint until either
the number of intervals reaches the cap or every splittable interval is
light.  Endpoints of large intervals and all members of small ones form the
good set, whose restricted instance is then solved exactly.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from ..axis import CandidateAxis, ClusterTable, candidate_restrict
from ..errors import IntervalTooSmall, KOutOfRange
from ..exact import Objective, dp_opt_line
from ..model import RankingProfile
from ..oracle import DistanceOracle
from .base import RuleOutput, finish
from .greedy import _dist, _oriented, _require_all_active, rule_greedy, straddle


class Interval(NamedTuple):
    """Axis positions ``lo..hi`` (inclusive), voter count and length."""

    lo: int
    hi: int
    n: int
    length: float

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def weight(self) -> float:
        return self.n * self.length


def partition_interval(lo: int, hi: int, profile: RankingProfile, axis: CandidateAxis,
                       table: ClusterTable, oracle: DistanceOracle) -> tuple:
    """Split ``[lo, hi]`` at its midpoint with at most four candidate queries.

    Returns
    -------
    left, right : Interval
        ``left`` ends at the last candidate left of the midpoint and
        ``right`` starts at the first candidate right of it.

    Raises
    ------
    IntervalTooSmall
        If the interval holds fewer than four candidates.
    """
    lo, hi, members = _oriented(axis, lo, hi)
    if len(members) < 4:
        raise IntervalTooSmall(f"interval has {len(members)} candidates; at least 4 needed")
    cl, cr = straddle(lo, hi, profile, axis, table)
    dl, dr = _dist(oracle, lo, cl), _dist(oracle, cr, hi)
    if dl >= dr:
        far = _dist(oracle, cl, hi)
        if dl > far:  # cl lies right of the midpoint
            cr, cl = cl, axis.neighbour(cl, -1)
            dr, dl = far, _dist(oracle, lo, cl)
    else:
        near = _dist(oracle, lo, cr)
        if near < dr:  # cr lies left of the midpoint
            cl, cr = cr, axis.neighbour(cr, 1)
            dl, dr = near, _dist(oracle, cr, hi)
    p_lo, p_cl, p_cr, p_hi = (axis.pos(c) for c in (lo, cl, cr, hi))
    left = Interval(p_lo, p_cl, table.count(axis.order[p_lo : p_cl + 1]), dl)
    right = Interval(p_cr, p_hi, table.count(axis.order[p_cr : p_hi + 1]), dr)
    return left, right


def interval_cap(k: int, n: int) -> float:
    """Upper limit on the number of intervals before splitting stops."""
    return 7 * k * (math.log2(5 * n * k) + 2)


def query_ceiling(k: int, n: int, good_size: int) -> int:
    """Candidate queries the rule may issue: greedy, initial cells, splits, good-set gaps."""
    return (6 * k - 15) + 4 * (k - 1) + 4 * math.ceil(interval_cap(k, n)) + (good_size - 1)


def _voronoi_cells(elected, profile, axis, table, oracle):
    """Cells of the elected candidates, from splitting each consecutive pair."""
    pos = sorted(axis.pos(c) for c in elected)
    m = len(axis)
    bounds = []  # (right end of cell i, its length share, left start of cell i+1, its share)
    for p, q in zip(pos, pos[1:]):
        a, b = axis[p], axis[q]
        if q - p == 1:
            bounds.append((p, 0.0, q, 0.0))
        elif q - p == 2:
            mid = axis[p + 1]
            da, db = _dist(oracle, a, mid), _dist(oracle, mid, b)
            bounds.append((p + 1, da, q, 0.0) if da <= db else (p, 0.0, p + 1, db))
        else:
            left, right = partition_interval(a, b, profile, axis, table, oracle)
            bounds.append((left.hi, left.length, right.lo, right.length))
    cells = []
    start, start_len = 0, 0.0
    for i, p in enumerate(pos):
        if i < len(bounds):
            end, end_len, nxt, nxt_len = bounds[i]
        else:
            end, end_len, nxt, nxt_len = m - 1, 0.0, None, 0.0
        members = axis.order[start : end + 1]
        cells.append(Interval(start, end, table.count(members), start_len + end_len))
        start, start_len = nxt, nxt_len
    return cells


def good_set(partition, axis: CandidateAxis) -> tuple:
    """Endpoints of intervals with more than three candidates, all members of the rest."""
    chosen = []
    for iv in partition:
        if iv.size > 3:
            chosen.extend((axis[iv.lo], axis[iv.hi]))
        else:
            chosen.extend(axis.order[iv.lo : iv.hi + 1])
    return tuple(sorted(set(chosen), key=axis.pos))


def rule_coreset(profile: RankingProfile, axis: CandidateAxis, table: ClusterTable,
                 oracle: DistanceOracle, k: int) -> RuleOutput:
    """Greedy committee, hierarchical partition, good set, exact restricted optimum.

    Raises
    ------
    KOutOfRange
        Unless ``3 <= k <= m - 1``.
    """
    m = len(axis)
    if not 3 <= k <= m - 1:
        raise KOutOfRange(f"k={k} must satisfy 3 <= k <= m - 1 = {m - 1}")
    _require_all_active(axis, table)
    greedy = rule_greedy(profile, axis, table, oracle, k)
    elected = greedy.artifacts["elected_order"]
    cells = _voronoi_cells(elected, profile, axis, table, oracle)
    delta_star = max(iv.length for iv in cells)
    threshold = delta_star / (5 * k)
    cap = interval_cap(k, profile.n)

    parts = list(cells)
    splits = 0
    stop = "cap"
    while len(parts) <= cap:
        splittable = [i for i, iv in enumerate(parts) if iv.size >= 4]
        if not splittable:
            stop = "no splittable interval"
            break
        i = max(splittable, key=lambda j: (parts[j].weight, -parts[j].lo))
        if parts[i].weight <= threshold:
            stop = "light"
            break
        iv = parts[i]
        left, right = partition_interval(axis[iv.lo], axis[iv.hi], profile, axis, table, oracle)
        parts[i : i + 1] = [left, right]
        splits += 1

    members = good_set(parts, axis)
    gaps = [oracle.candidate_query(a, b) for a, b in zip(members, members[1:])]
    restricted = candidate_restrict(profile, axis, members, gaps)
    committee, value = dp_opt_line(restricted, k, Objective.SocialCost)
    return finish(
        "coreset", committee, oracle,
        elected_order=elected,
        initial_cells=tuple(cells),
        delta_star=delta_star,
        partition=tuple(parts),
        splits=splits,
        stop_reason=stop,
        good_set=members,
        interval_cap=cap,
        query_ceiling=query_ceiling(k, profile.n, len(members)),
        restricted_cost=value,
    )
