"""Purely ordinal rules for two-member committees (no distance queries)."""

from __future__ import annotations

import numpy as np

from ..axis import CandidateAxis, ClusterTable
from ..errors import TooFewActive, WrongM
from ..model import RankingProfile
from .base import RuleOutput, finish


def _active_on_axis(axis: CandidateAxis, table: ClusterTable) -> list:
    act = [c for c in axis if table.is_active(c)]
    if len(act) < 2:
        raise TooFewActive(f"{len(act)} active candidate(s); two are needed")
    return act


def rule_extremes(profile: RankingProfile, axis: CandidateAxis, table: ClusterTable) -> RuleOutput:
    """Elect the leftmost and the rightmost active candidates."""
    act = _active_on_axis(axis, table)
    return finish("extremes2", (act[0], act[-1]))


def rule_median_clusters(profile: RankingProfile, axis: CandidateAxis, table: ClusterTable) -> RuleOutput:
    """Elect a median favourite on each side of the extremes' bisector.

    Voters are split into ``A1`` (prefer the leftmost active candidate to the
    rightmost one) and ``A2``.  Ordering each group by the axis position of
    their favourites, the rule elects the favourite of the ``ceil(|A1|/2)``-th
    voter of ``A1`` and of the ``floor(|A2|/2) + 1``-th voter of ``A2``.

    If both picks coincide, the second seat goes to the active candidate
    closest to it in axis steps, ties to the left.
    """
    act = _active_on_axis(axis, table)
    cl, cr = act[0], act[-1]
    rank_of = profile.rank_of
    in_a1 = rank_of[:, cl] < rank_of[:, cr]
    tops = np.asarray(table.top)
    top_pos = axis.positions()[tops]

    def nth_top(mask, nth):
        ordered = np.sort(top_pos[mask], kind="stable")
        return axis[int(ordered[nth - 1])]

    n1, n2 = int(in_a1.sum()), int((~in_a1).sum())
    a1 = nth_top(in_a1, (n1 + 1) // 2)
    a2 = nth_top(~in_a1, n2 // 2 + 1)
    second = a2
    if a1 == a2:
        p = axis.pos(a1)
        others = sorted((c for c in act if c != a1), key=lambda c: (abs(axis.pos(c) - p), axis.pos(c)))
        second = others[0]
    return finish("median2", (a1, second), medians=(a1, a2), group_sizes=(n1, n2))


def rule_two_of_three(profile: RankingProfile, axis: CandidateAxis) -> RuleOutput:
    """Two out of three candidates by pairwise support of consecutive pairs.

    With axis ``a < b < c``: elect ``a`` if ``a > b > c`` is at least as common
    as ``b > a > c`` (else ``b``); elect ``b`` if ``b > c > a`` is at least as
    common as ``c > b > a`` (else ``c``); if ``b`` won both, add ``a``.

    Raises
    ------
    WrongM
        Unless there are exactly three candidates.
    """
    if profile.m != 3 or len(axis) != 3:
        raise WrongM(f"two-of-three needs m = 3, got m = {profile.m}")
    a, b, c = axis.order
    rows = [tuple(int(x) for x in r) for r in profile.rankings]
    count = {r: rows.count(r) for r in set(rows)}
    first = a if count.get((a, b, c), 0) >= count.get((b, a, c), 0) else b
    second = b if count.get((b, c, a), 0) >= count.get((c, b, a), 0) else c
    committee = {first, second}
    if first == second == b:
        committee.add(a)
    return finish("two-of-three", committee, steps=(first, second))
