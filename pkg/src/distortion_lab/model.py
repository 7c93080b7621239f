"""Ground-truth instances on the real line, ranking profiles and committee costs.

An :class:`Instance` stores the hidden voter and candidate locations.  Rules
never see it; they receive the :class:`RankingProfile` derived from it plus a
metered :class:`~distortion_lab.oracle.DistanceOracle`.

Candidate ids are indices into ``Instance.candidates``, which is kept sorted,
so id order is the left-to-right order on the line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyCommittee, GenerationFailed, InstanceError, InvalidId, TieDetected

#: Minimum separation enforced by :func:`random_instance` between competing
#: distances, between candidate locations and for non-zero voter-candidate distances.
DEFAULT_MARGIN = 1e-9

Committee = tuple  # sorted tuple of distinct candidate ids


@dataclass(frozen=True, eq=False)
class Instance:
    """Voters and candidates on the real line.

    Parameters
    ----------
    candidates : array_like of float
        Candidate locations, strictly increasing.
    voters : array_like of float
        Voter locations, any order.
    name : str, optional
        Free-form label (family and parameters for generated instances).
    source_order : tuple of int, optional
        For instances loaded from disk, ``source_order[i]`` is the on-disk
        index of the candidate stored at sorted position ``i``.
    """

    candidates: np.ndarray
    voters: np.ndarray
    name: str = ""
    source_order: tuple | None = None

    def __post_init__(self):
        cands = np.asarray(self.candidates, dtype=float).copy()
        voters = np.asarray(self.voters, dtype=float).copy()
        if cands.ndim != 1 or voters.ndim != 1:
            raise InstanceError("locations must be one-dimensional")
        if cands.size == 0 or voters.size == 0:
            raise InstanceError("an instance needs at least one candidate and one voter")
        if not (np.all(np.isfinite(cands)) and np.all(np.isfinite(voters))):
            raise InstanceError("all locations must be finite")
        if np.any(np.diff(cands) <= 0):
            raise InstanceError("candidate locations must be strictly increasing")
        cands.setflags(write=False)
        voters.setflags(write=False)
        object.__setattr__(self, "candidates", cands)
        object.__setattr__(self, "voters", voters)

    @property
    def n(self) -> int:
        return int(self.voters.size)

    @property
    def m(self) -> int:
        return int(self.candidates.size)

    def distance_matrix(self) -> np.ndarray:
        """``n x m`` matrix of voter-candidate distances."""
        return np.abs(self.voters[:, None] - self.candidates[None, :])

    def same_as(self, other: "Instance") -> bool:
        return (
            np.array_equal(self.candidates, other.candidates)
            and np.array_equal(self.voters, other.voters)
        )

    def with_name(self, name: str) -> "Instance":
        return Instance(self.candidates, self.voters, name, self.source_order)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "candidates": [float(x) for x in self.candidates],
            "voters": [float(x) for x in self.voters],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        raw = np.asarray(data["candidates"], dtype=float)
        order = np.argsort(raw, kind="stable")
        return cls(
            candidates=raw[order],
            voters=np.asarray(data["voters"], dtype=float),
            name=str(data.get("name", "")),
            source_order=tuple(int(i) for i in order),
        )


def save_instance(instance: Instance, path) -> Path:
    """Write ``instance`` in the JSON instance format and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance.to_dict(), indent=1) + "\n")
    return path


def load_instance(path) -> Instance:
    """Read an instance file; candidates are sorted and the permutation recorded."""
    return Instance.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True, eq=False)
class RankingProfile:
    """One strict ranking (most to least preferred candidate ids) per voter."""

    rankings: np.ndarray
    rank_of: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        r = np.asarray(self.rankings, dtype=np.int64).copy()
        if r.ndim != 2:
            raise InstanceError("rankings must be an n x m array")
        n, m = r.shape
        if not np.array_equal(np.sort(r, axis=1), np.broadcast_to(np.arange(m), (n, m))):
            raise InstanceError("every ranking must be a permutation of 0..m-1")
        rank_of = np.empty_like(r)
        rank_of[np.arange(n)[:, None], r] = np.arange(m)[None, :]
        r.setflags(write=False)
        rank_of.setflags(write=False)
        object.__setattr__(self, "rankings", r)
        object.__setattr__(self, "rank_of", rank_of)

    @property
    def n(self) -> int:
        return int(self.rankings.shape[0])

    @property
    def m(self) -> int:
        return int(self.rankings.shape[1])

    def top(self, v: int) -> int:
        return int(self.rankings[v, 0])

    def tops(self) -> np.ndarray:
        return self.rankings[:, 0]

    def prefers(self, v: int, a: int, b: int) -> bool:
        """True when voter ``v`` ranks candidate ``a`` above candidate ``b``."""
        return bool(self.rank_of[v, a] < self.rank_of[v, b])

    def __eq__(self, other):
        if not isinstance(other, RankingProfile):
            return NotImplemented
        return np.array_equal(self.rankings, other.rankings)

    __hash__ = None


@dataclass(frozen=True)
class CostReport:
    social_cost: float
    egalitarian_cost: float
    assignment: tuple  # assignment[v] = committee member serving voter v
    per_voter: tuple = field(repr=False, default=())


def derive_profile(instance: Instance) -> RankingProfile:
    """Rank candidates by distance for every voter.

    Raises :class:`TieDetected` if some voter is exactly equidistant from two
    candidates.
    """
    dist = instance.distance_matrix()
    order = np.argsort(dist, axis=1, kind="stable")
    ranked = np.take_along_axis(dist, order, axis=1)
    gaps = np.diff(ranked, axis=1)
    if gaps.size and np.any(gaps <= 0):
        v, r = np.argwhere(gaps <= 0)[0]
        raise TieDetected(
            f"voter {v} is equidistant from candidates {order[v, r]} and {order[v, r + 1]}"
        )
    return RankingProfile(order)


def check_committee(committee: Iterable[int], m: int) -> Committee:
    members = tuple(sorted({int(c) for c in committee}))
    if not members:
        raise EmptyCommittee("committee is empty")
    if members[0] < 0 or members[-1] >= m:
        raise InvalidId(f"committee {members} has ids outside 0..{m - 1}")
    return members


def cost(instance: Instance, committee: Iterable[int]) -> CostReport:
    """Social and egalitarian cost of ``committee`` with nearest-member assignment."""
    members = check_committee(committee, instance.m)
    sub = np.abs(instance.voters[:, None] - instance.candidates[list(members)][None, :])
    nearest = np.argmin(sub, axis=1)
    per_voter = sub[np.arange(instance.n), nearest]
    return CostReport(
        social_cost=float(per_voter.sum()),
        egalitarian_cost=float(per_voter.max()),
        assignment=tuple(members[i] for i in nearest),
        per_voter=tuple(float(x) for x in per_voter),
    )


def tie_margin(instance: Instance) -> float:
    """Smallest separation relevant to strict comparisons.

    The minimum over consecutive candidate gaps, consecutive sorted distances
    of every voter, and non-zero voter-candidate distances.  A voter exactly
    collocated with a candidate is allowed (distance zero is not a tie).
    """
    dist = instance.distance_matrix()
    parts = [np.inf]
    if instance.m > 1:
        parts.append(np.diff(instance.candidates).min())
        parts.append(np.diff(np.sort(dist, axis=1), axis=1).min())
    nonzero = dist[dist > 0]
    if nonzero.size:
        parts.append(nonzero.min())
    return float(min(parts))


def active_candidates(instance: Instance) -> np.ndarray:
    """Boolean mask of candidates that are some voter's nearest candidate."""
    tops = np.argmin(instance.distance_matrix(), axis=1)
    mask = np.zeros(instance.m, dtype=bool)
    mask[tops] = True
    return mask


def is_non_degenerate(instance: Instance, k: int | None = None) -> bool:
    """Both extreme candidates active (so every candidate lies in the active span)."""
    active = active_candidates(instance)
    ok = bool(active[0] and active[-1])
    if k is not None:
        ok = ok and instance.n >= k + 1
    return ok


PLACEMENTS = ("uniform", "clustered", "collocated")


def random_instance(
    seed,
    n: int,
    m: int,
    placement: str = "uniform",
    *,
    active_only: bool = False,
    collocated_fraction: float = 0.5,
    span: float = 100.0,
    margin: float = DEFAULT_MARGIN,
    max_tries: int = 200,
) -> Instance:
    """Sample a tie-free, non-degenerate instance.

    Parameters
    ----------
    seed : int or numpy.random.SeedSequence
        Seed for a PCG64 generator (``numpy.random.default_rng``).
    n, m : int
        Number of voters and candidates.
    placement : {"uniform", "clustered", "collocated"}
        ``uniform`` draws everything uniformly on ``[0, span]``; ``clustered``
        draws around a few Gaussian centres; ``collocated`` puts a fraction
        ``collocated_fraction`` of the free voters exactly on candidates.
    active_only : bool
        Seed one voter inside every candidate's Voronoi cell so all candidates
        are active (requires ``n >= m``).
    """
    if placement not in PLACEMENTS:
        raise ValueError(f"unknown placement {placement!r}; expected one of {PLACEMENTS}")
    if m < 1 or n < 1:
        raise ValueError("n and m must be positive")
    if active_only and n < m:
        raise ValueError("active_only needs at least one voter per candidate")
    if not active_only and m >= 2 and n < 2:
        raise ValueError("a non-degenerate instance with m >= 2 needs n >= 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        cands = _draw_candidates(rng, m, placement, span)
        if m > 1 and np.diff(cands).min() < margin:
            continue
        voters = _draw_voters(rng, cands, n, placement, span, active_only, collocated_fraction)
        inst = Instance(cands, voters, name=f"random:{placement}:n={n}:m={m}")
        if tie_margin(inst) < margin:
            continue
        active = active_candidates(inst)
        if not (active[0] and active[-1]):
            continue
        if active_only and not active.all():
            continue
        return inst
    raise GenerationFailed(f"no valid instance after {max_tries} attempts (n={n}, m={m})")


def _draw_candidates(rng, m, placement, span):
    if placement == "clustered":
        centres = rng.uniform(0, span, size=max(2, m // 4))
        pts = rng.choice(centres, size=m) + rng.normal(0, span / 40, size=m)
    else:
        pts = rng.uniform(0, span, size=m)
    return np.sort(pts)


def _cell_bounds(cands):
    mids = (cands[1:] + cands[:-1]) / 2
    width = np.diff(cands).max() if cands.size > 1 else 1.0
    lo = np.concatenate([[cands[0] - width / 2], mids])
    hi = np.concatenate([mids, [cands[-1] + width / 2]])
    return lo, hi


def _draw_voters(rng, cands, n, placement, span, active_only, collocated_fraction):
    m = cands.size
    lo, hi = _cell_bounds(cands)
    # Seeded voters sit in the inner 80% of a Voronoi cell so they keep that top.
    seeded = list(range(m)) if active_only else ([0, m - 1] if m > 1 else [0])
    fixed = [lo[i] + (hi[i] - lo[i]) * rng.uniform(0.1, 0.9) for i in seeded]
    rest = n - len(fixed)
    if placement == "clustered":
        free = rng.choice(cands, size=rest) + rng.normal(0, span / 30, size=rest)
    else:
        pad = 0.05 * (cands[-1] - cands[0] + 1.0)
        free = rng.uniform(cands[0] - pad, cands[-1] + pad, size=rest)
    if placement == "collocated" and rest:
        mask = rng.random(rest) < collocated_fraction
        free[mask] = rng.choice(cands, size=int(mask.sum()))
    voters = np.concatenate([np.asarray(fixed, dtype=float), free])
    rng.shuffle(voters)
    return voters
