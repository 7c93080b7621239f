"""Ordinal preprocessing: candidate axis, clusters, span trimming and restriction.

Everything here is computed from rankings only.  The axis is recovered from a
:class:`~distortion_lab.model.RankingProfile` by looking at which candidates
voters rank last: on a line the least preferred candidate of any voter is one
of the two extremes, and a voter whose favourite is an extreme ranks all
candidates in axis order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InactiveCandidate, MissingGap, NoActiveCandidate, NotSinglePeaked
from .model import Instance, RankingProfile


@dataclass(frozen=True)
class CandidateAxis:
    """Left-to-right order of candidate ids."""

    order: tuple
    _pos: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        order = tuple(int(c) for c in self.order)
        if sorted(order) != list(range(len(order))):
            raise ValueError("axis must be a permutation of the candidate ids")
        pos = [0] * len(order)
        for i, c in enumerate(order):
            pos[c] = i
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_pos", tuple(pos))

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]

    def pos(self, c: int) -> int:
        return self._pos[c]

    def positions(self) -> np.ndarray:
        return np.asarray(self._pos)

    def interval(self, a: int, b: int) -> tuple:
        """Candidates from ``a`` to ``b`` inclusive, in axis order."""
        i, j = sorted((self._pos[a], self._pos[b]))
        return self.order[i : j + 1]

    def between(self, a: int, b: int) -> tuple:
        return self.interval(a, b)[1:-1]

    def neighbour(self, c: int, step: int) -> int | None:
        i = self._pos[c] + step
        return self.order[i] if 0 <= i < len(self.order) else None

    def reversed(self) -> "CandidateAxis":
        return CandidateAxis(self.order[::-1])


@dataclass(frozen=True)
class ClusterTable:
    """Voters grouped by their top candidate."""

    members: tuple  # members[c] = sorted tuple of voter ids with top(v) = c
    top: tuple  # top[v]

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(g) for g in self.members], dtype=np.int64)

    @property
    def active(self) -> np.ndarray:
        return self.sizes > 0

    def is_active(self, c: int) -> bool:
        return len(self.members[c]) > 0

    def first(self, c: int) -> int:
        """Probe voter for ``c``: its lowest-id cluster member."""
        if not self.members[c]:
            raise InactiveCandidate(f"candidate {c} has an empty cluster")
        return self.members[c][0]

    def count(self, candidates) -> int:
        return int(sum(len(self.members[c]) for c in candidates))


def is_single_peaked(profile: RankingProfile, axis: CandidateAxis) -> bool:
    """Every prefix of every ranking is a contiguous stretch of the axis."""
    if profile.m != len(axis):
        return False
    pos = axis.positions()[profile.rankings]
    span = np.maximum.accumulate(pos, axis=1) - np.minimum.accumulate(pos, axis=1)
    return bool(np.all(span == np.arange(profile.m)[None, :]))


def recover_axis(profile: RankingProfile) -> CandidateAxis:
    """Recover the candidate axis from a single-peaked profile.

    When some voter's favourite is ranked last by another voter, that
    favourite is an extreme and the voter's ranking is the axis itself.
    Otherwise (an inactive extreme) fall back to endpoint peeling.  The result
    is oriented so that voter 0's favourite sits in the left half.

    Raises
    ------
    NotSinglePeaked
        If more than two candidates are ranked last or the result fails the
        single-peaked check.
    """
    n, m = profile.n, profile.m
    if m == 1:
        return CandidateAxis((0,))
    lasts = set(int(c) for c in profile.rankings[:, -1])
    if len(lasts) > 2:
        raise NotSinglePeaked(f"{len(lasts)} distinct last-ranked candidates")
    tops = profile.tops()
    order = None
    for v in range(n):
        if int(tops[v]) in lasts:
            order = tuple(int(c) for c in profile.rankings[v])
            break
    if order is None:
        order = _peel(profile)
    axis = _orient(CandidateAxis(order), profile)
    if not is_single_peaked(profile, axis):
        raise NotSinglePeaked("profile is not single-peaked on the recovered axis")
    return axis


def _peel(profile: RankingProfile) -> tuple:
    remaining = set(range(profile.m))
    left, right = [], []
    rank_of = profile.rank_of
    tops = profile.tops()
    while len(remaining) > 1:
        rem = np.fromiter(sorted(remaining), dtype=np.int64)
        last = rem[np.argmax(rank_of[:, rem], axis=1)]
        distinct = sorted(set(int(c) for c in last))
        if len(distinct) > 2:
            raise NotSinglePeaked("more than two endpoints while peeling")
        if len(distinct) == 2:
            a, b = distinct
            side_a = _side(a, last, tops, left, right, rank_of)
            if side_a == "right":
                a, b = b, a
            left.append(a)
            right.append(b)
            remaining -= {a, b}
            continue
        x = distinct[0]
        (right if _side(x, last, tops, left, right, rank_of) == "right" else left).append(x)
        remaining.discard(x)
    mid = list(remaining)
    return tuple(left + mid + right[::-1])


def _side(x, last, tops, left, right, rank_of) -> str:
    """Decide whether peeled endpoint ``x`` belongs with the left or right list."""
    voters = np.flatnonzero(last == x)
    if any(int(tops[v]) in left for v in voters):
        return "right"
    if any(int(tops[v]) in right for v in voters):
        return "left"
    # A voter ranking x last prefers x to the peeled neighbour on x's side.
    if left and any(rank_of[v, left[-1]] < rank_of[v, x] for v in voters):
        return "right"
    if right and any(rank_of[v, right[-1]] < rank_of[v, x] for v in voters):
        return "left"
    return "left" if len(left) <= len(right) else "right"


def _orient(axis: CandidateAxis, profile: RankingProfile) -> CandidateAxis:
    m = len(axis)
    pos = axis.positions()[profile.rankings[0]]
    if tuple(pos) <= tuple(m - 1 - pos):
        return axis
    return axis.reversed()


def clusters(profile: RankingProfile, axis: CandidateAxis | None = None) -> ClusterTable:
    """Group voters by top candidate (``axis`` is accepted for symmetry and unused)."""
    tops = profile.tops()
    groups = [[] for _ in range(profile.m)]
    for v, c in enumerate(tops):
        groups[int(c)].append(v)
    return ClusterTable(
        members=tuple(tuple(g) for g in groups),
        top=tuple(int(c) for c in tops),
    )


def trim_to_active_span(axis: CandidateAxis, table: ClusterTable) -> tuple:
    """Candidates from the leftmost to the rightmost active one, in axis order."""
    active_pos = [i for i, c in enumerate(axis) if table.is_active(c)]
    if not active_pos:
        raise NoActiveCandidate("no candidate is anybody's top choice")
    return axis.order[active_pos[0] : active_pos[-1] + 1]


@dataclass(frozen=True)
class WeightedLineInstance:
    """Candidate-restricted instance: weighted points on a line.

    Attributes
    ----------
    ids : tuple of int
        Candidate ids in axis order.
    weights : numpy.ndarray
        Voter count attached to each candidate (all >= 1).
    gaps : numpy.ndarray
        ``gaps[i]`` is the distance between ``ids[i]`` and ``ids[i + 1]``.
    """

    ids: tuple
    weights: np.ndarray
    gaps: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights)
        g = np.asarray(self.gaps, dtype=float)
        if len(self.ids) != w.size or g.size != max(w.size - 1, 0):
            raise ValueError("ids, weights and gaps have inconsistent lengths")
        if np.any(w < 1):
            raise ValueError("weights must be positive")
        if np.any(g <= 0):
            raise ValueError("gaps must be positive")
        object.__setattr__(self, "ids", tuple(int(i) for i in self.ids))
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "gaps", g)

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def positions(self) -> np.ndarray:
        """Coordinates with the first point at 0."""
        return np.concatenate([[0.0], np.cumsum(self.gaps)])

    @property
    def total_weight(self):
        return self.weights.sum()

    def to_instance(self, name: str = "") -> Instance:
        """Expand to an :class:`Instance` with each weight unit as a collocated voter.

        Candidate ``i`` of the result is ``ids[i]``; weights must be integral.
        """
        reps = np.asarray(self.weights).astype(np.int64)
        return Instance(self.positions, np.repeat(self.positions, reps), name=name)


def candidate_restrict(
    profile: RankingProfile,
    axis: CandidateAxis,
    subset: Sequence[int],
    gaps: Mapping | Sequence[float],
) -> WeightedLineInstance:
    """Build the candidate-restricted instance induced by ``subset``.

    Each voter is moved onto her favourite member of ``subset`` (read off the
    ranking).  Members that nobody picks are dropped and the gaps around them
    merged.

    Parameters
    ----------
    gaps : mapping or sequence
        Either a sequence aligned with ``subset`` sorted in axis order, or a
        mapping from pairs of consecutive members to their distance (either
        orientation of the pair is accepted).
    """
    members = sorted({int(c) for c in subset}, key=axis.pos)
    if not members:
        raise ValueError("subset is empty")
    if isinstance(gaps, Mapping):
        seq = []
        for a, b in zip(members, members[1:]):
            if (a, b) in gaps:
                seq.append(gaps[(a, b)])
            elif (b, a) in gaps:
                seq.append(gaps[(b, a)])
            else:
                raise MissingGap(f"no gap supplied between candidates {a} and {b}")
    else:
        seq = list(gaps)
        if len(seq) != len(members) - 1:
            raise MissingGap(f"expected {len(members) - 1} gaps, got {len(seq)}")
    sub = np.asarray(members, dtype=np.int64)
    top_sub = sub[np.argmin(profile.rank_of[:, sub], axis=1)]
    weights = np.array([np.count_nonzero(top_sub == c) for c in members], dtype=np.int64)
    kept = np.flatnonzero(weights > 0)
    seq = [float(g) for g in seq]
    merged = [sum(seq[i:j]) for i, j in zip(kept, kept[1:])]
    return WeightedLineInstance(
        ids=tuple(sub[kept]),
        weights=weights[kept],
        gaps=np.asarray(merged, dtype=float),
    )
