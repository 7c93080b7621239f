"""Metered distance queries.

:class:`DistanceOracle` is the only object that can read hidden locations.  It
answers regular (voter-candidate) queries directly and simulates voter-voter
and candidate-candidate queries from regular ones, using the candidate axis
and cluster table to pick probe candidates and probe voters.

Every request goes through a cache, so counts in the :class:`QueryLedger`
distinguish issued (post-cache) queries from gross requests.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .axis import CandidateAxis, ClusterTable
from .errors import InsufficientCandidates, InvalidId
from .model import Instance

REGULAR = "regular"
CANDIDATE = "candidate"
VOTER = "voter"
QUERY_TYPES = (REGULAR, CANDIDATE, VOTER)

#: Regular queries needed to simulate one query of each type.
SIMULATION_COST = {REGULAR: 1, CANDIDATE: 6, VOTER: 2}


def same(p: float, q: float) -> bool:
    """Float equality used by the case analyses of the simulations."""
    return math.isclose(p, q, rel_tol=1e-12, abs_tol=1e-12)


class LogEntry(NamedTuple):
    seq: int
    type: str
    id1: int
    id2: int
    answer: float
    cached: bool


@dataclass
class QueryLedger:
    """Counts and log of every distance request.

    Attributes
    ----------
    counts : dict
        Top-level queries per type that missed the cache.  Regular queries
        issued inside a simulation are not counted here.
    gross_counts : dict
        Top-level requests per type, cache hits included.
    regular_issued : int
        Every regular query that reached the hidden instance, including those
        issued on behalf of simulations.
    log : list of LogEntry
    """

    counts: dict = field(default_factory=lambda: dict.fromkeys(QUERY_TYPES, 0))
    gross_counts: dict = field(default_factory=lambda: dict.fromkeys(QUERY_TYPES, 0))
    regular_issued: int = 0
    log: list = field(default_factory=list)

    def record(self, kind, id1, id2, answer, cached, top_level=True):
        if top_level:
            self.gross_counts[kind] += 1
            if not cached:
                self.counts[kind] += 1
        if kind == REGULAR and not cached:
            self.regular_issued += 1
        self.log.append(LogEntry(len(self.log), kind, int(id1), int(id2), float(answer), bool(cached)))

    @property
    def regular_budget(self) -> int:
        """Upper bound on ``regular_issued`` implied by the simulation costs."""
        return sum(SIMULATION_COST[t] * self.counts[t] for t in QUERY_TYPES)

    @property
    def gross_regular_equiv(self) -> int:
        return sum(SIMULATION_COST[t] * self.gross_counts[t] for t in QUERY_TYPES)

    def snapshot(self) -> dict:
        return {**{f"q_{t}": self.counts[t] for t in QUERY_TYPES},
                "q_gross_regular_equiv": self.gross_regular_equiv, "regular_issued": self.regular_issued}

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(LogEntry._fields)
        for e in self.log:
            w.writerow((e.seq, e.type, e.id1, e.id2, f"{e.answer:.17g}", int(e.cached)))
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


class ProbeResult(NamedTuple):
    distance: float
    voter: int
    voter_left_of_candidate: bool  # probe voter for the left candidate lies strictly left of it


class DistanceOracle:
    """Metered access to distances of one hidden instance.

    Parameters
    ----------
    instance : Instance
        Ground truth.  Held privately and read only by :meth:`_lookup`.
    axis : CandidateAxis, optional
    clusters : ClusterTable, optional
        Needed for voter and candidate query simulation.
    """

    def __init__(self, instance: Instance, axis: CandidateAxis | None = None,
                 clusters: ClusterTable | None = None):
        self._instance = instance
        self.n = instance.n
        self.m = instance.m
        self.axis = axis
        self.clusters = clusters
        self.ledger = QueryLedger()
        self._cache = {REGULAR: {}, CANDIDATE: {}, VOTER: {}}
        self._expose_regular = False

    # the single point where hidden positions are read
    def _lookup(self, v: int, c: int) -> float:
        return abs(float(self._instance.voters[v]) - float(self._instance.candidates[c]))

    def _check_voter(self, v):
        if not 0 <= v < self.n:
            raise InvalidId(f"voter id {v} out of range 0..{self.n - 1}")

    def _check_candidate(self, c):
        if not 0 <= c < self.m:
            raise InvalidId(f"candidate id {c} out of range 0..{self.m - 1}")

    def _need_structure(self):
        if self.axis is None or self.clusters is None:
            raise ValueError("voter and candidate queries need the axis and cluster table")

    def regular_query(self, v: int, c: int, *, _top_level: bool = True) -> float:
        """Distance between voter ``v`` and candidate ``c``."""
        v, c = int(v), int(c)
        self._check_voter(v)
        self._check_candidate(c)
        cache = self._cache[REGULAR]
        cached = (v, c) in cache
        if not cached:
            cache[(v, c)] = self._lookup(v, c)
        self.ledger.record(REGULAR, v, c, cache[(v, c)], cached, _top_level)
        return cache[(v, c)]

    def _reg(self, v, c):
        return self.regular_query(v, c, _top_level=self._expose_regular)

    def voter_query(self, v: int, w: int, *, _top_level: bool = True) -> float:
        """Distance between voters ``v`` and ``w`` from at most two regular queries."""
        v, w = int(v), int(w)
        self._check_voter(v)
        self._check_voter(w)
        if v == w:
            return 0.0
        key = (min(v, w), max(v, w))
        cache = self._cache[VOTER]
        cached = key in cache
        if not cached:
            cache[key] = self._simulate_voter(v, w)
        self.ledger.record(VOTER, key[0], key[1], cache[key], cached, _top_level)
        return cache[key]

    def _simulate_voter(self, v, w, probe=None) -> float:
        self._need_structure()
        axis, top = self.axis, self.clusters.top
        tv, tw = top[v], top[w]
        if probe is None:
            probe = self._voter_probe(tv, tw)
        if probe is None:
            raise InsufficientCandidates("a voter query between adjacent clusters needs m >= 3")
        dv, dw = self._reg(v, probe), self._reg(w, probe)
        if tv != tw and probe in axis.between(tv, tw):
            return dv + dw
        return abs(dv - dw)

    def _voter_probe(self, tv, tw):
        axis = self.axis
        if tv == tw:
            return axis.neighbour(tv, 1) if axis.neighbour(tv, 1) is not None else axis.neighbour(tv, -1)
        inner = axis.between(tv, tw)
        if inner:
            return inner[0]
        lo, hi = sorted((tv, tw), key=axis.pos)
        outer = axis.neighbour(hi, 1)
        return outer if outer is not None else axis.neighbour(lo, -1)

    def candidate_query(self, c: int, d: int, *, _top_level: bool = True) -> float:
        """Distance between candidates ``c`` and ``d`` from at most six regular queries.

        Raises
        ------
        InactiveCandidate
            If either candidate has no cluster voter to probe with.
        """
        c, d = int(c), int(d)
        self._check_candidate(c)
        self._check_candidate(d)
        if c == d:
            return 0.0
        key = (min(c, d), max(c, d))
        cache = self._cache[CANDIDATE]
        cached = key in cache
        if not cached:
            cache[key] = self._simulate_candidate(c, d).distance
        self.ledger.record(CANDIDATE, key[0], key[1], cache[key], cached, _top_level)
        return cache[key]

    def probe_pair(self, c: int, d: int) -> ProbeResult:
        """Run the candidate-query simulation and also report the probe voter's side.

        The underlying regular queries are recorded as top-level regular
        queries, and no candidate query is charged.
        """
        self._check_candidate(c)
        self._check_candidate(d)
        self._expose_regular = True
        try:
            return self._simulate_candidate(int(c), int(d))
        finally:
            self._expose_regular = False

    def _simulate_candidate(self, c, d) -> ProbeResult:
        # Notation follows the case analysis: c < c' on the axis, v in Cluster(c),
        # v' in Cluster(c'); a = d(v,c), b = d(v,c'), x = d(v',c'), y = d(v',c).
        self._need_structure()
        if self.axis.pos(c) > self.axis.pos(d):
            c, d = d, c
        v, vp = self.clusters.first(c), self.clusters.first(d)
        a = self._reg(v, c)
        if a == 0:
            return ProbeResult(self._reg(v, d), v, False)
        x = self._reg(vp, d)
        b = self._reg(v, d)
        y = self._reg(vp, c)
        if x == 0:
            return ProbeResult(y, v, same(y, b - a))
        if same(b, y):
            w = self._simulate_voter(v, vp, probe=self._pair_probe(c, d))
            left = same(w, y + a)
        elif b > y:
            left = same(b, a + x + y) or a > x
        else:
            left = not (same(y, a + b + x) or a > x)
        return ProbeResult(b - a if left else b + a, v, left)

    def _pair_probe(self, c, d):
        inner = self.axis.between(c, d)
        if inner:
            return inner[0]
        probe = self._voter_probe(c, d)
        if probe is None:
            raise InsufficientCandidates("disambiguating b = y needs a third candidate")
        return probe
