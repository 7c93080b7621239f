"""Exact optima and distortion evaluation.

Two independent solvers are provided: exhaustive enumeration of committees
(:func:`brute_force_opt`) and an O(F^2 k) dynamic program over facilities
sorted on the line (:func:`dp_opt_line`, :func:`exact_opt`).  The tests pit
them against each other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .axis import CandidateAxis, WeightedLineInstance
from .errors import KTooLarge, TooLarge
from .model import Instance, check_committee, cost

INF = math.inf


class Objective(enum.Enum):
    SocialCost = "sc"
    EgalitarianCost = "ec"

    def of(self, report) -> float:
        return report.social_cost if self is Objective.SocialCost else report.egalitarian_cost


SC = Objective.SocialCost
EC = Objective.EgalitarianCost


def brute_force_opt(instance: Instance, k: int, objective: Objective = SC, limit: int = 16,
                    chunk: int = 4096) -> tuple:
    """Best ``k``-committee over all candidates by enumeration.

    Ties are broken towards the lexicographically smallest committee.

    Raises
    ------
    TooLarge
        If ``m`` exceeds ``limit``.
    """
    m = instance.m
    if m > limit:
        raise TooLarge(f"m={m} exceeds the brute-force limit {limit}")
    if not 1 <= k <= m:
        raise KTooLarge(f"k={k} must lie in 1..{m}")
    dist = instance.distance_matrix()
    best_cost, best = INF, None
    it = combinations(range(m), k)
    while True:
        block = list(_take(it, chunk))
        if not block:
            break
        idx = np.asarray(block)
        per_voter = dist[:, idx].min(axis=2)
        agg = per_voter.sum(axis=0) if objective is SC else per_voter.max(axis=0)
        i = int(np.argmin(agg))
        if agg[i] < best_cost:
            best_cost, best = float(agg[i]), tuple(block[i])
    return best, objective.of(cost(instance, best))


def _take(it, n):
    for _, x in zip(range(n), it):
        yield x


def _line_dp(fac: np.ndarray, pts: np.ndarray, wts: np.ndarray, k: int, objective: Objective):
    """Optimal ``k`` facilities among sorted ``fac`` for weighted demand ``pts``.

    Returns the chosen facility indices.  Demand between two consecutive chosen
    facilities is split at their midpoint.
    """
    order = np.argsort(pts, kind="stable")
    p, w = pts[order], wts[order]
    F = fac.size
    W = np.concatenate([[0.0], np.cumsum(w)])
    WP = np.concatenate([[0.0], np.cumsum(w * p)])
    total = SC if objective is SC else EC

    def seg_sum_to(lo, hi, f, right_of_f):
        # sum of w*|p - f| over demand indices [lo, hi)
        s = WP[hi] - WP[lo]
        c = W[hi] - W[lo]
        return (s - f * c) if right_of_f else (f * c - s)

    left_idx = np.searchsorted(p, fac, side="left")  # demand strictly left of each facility
    right_idx = np.searchsorted(p, fac, side="right")  # demand at or left of each facility
    n_pts = p.size
    if total is SC:
        head = seg_sum_to(0, left_idx, fac, False)
        tail = seg_sum_to(right_idx, n_pts, fac, True)
    else:
        head = np.where(left_idx > 0, fac - p[0], 0.0)
        tail = np.where(right_idx < n_pts, p[-1] - fac, 0.0)

    # between[i, j]: cost of demand strictly between fac[i] and fac[j] (i < j)
    fi, fj = np.meshgrid(fac, fac, indexing="ij")
    mid = (fi + fj) / 2
    lo = np.broadcast_to(right_idx[:, None], (F, F))
    hi = np.broadcast_to(left_idx[None, :], (F, F))
    cut = np.clip(np.searchsorted(p, mid, side="right"), lo, hi)
    if total is SC:
        between = seg_sum_to(lo, cut, fi, True) + seg_sum_to(cut, hi, fj, False)
    else:
        left_far = np.where(cut > lo, p[np.maximum(cut - 1, 0)] - fi, 0.0)
        right_far = np.where(hi > cut, fj - p[np.minimum(cut, n_pts - 1)], 0.0)
        between = np.maximum(left_far, right_far)
    between = np.where(np.triu(np.ones((F, F), dtype=bool), 1), between, INF)

    combine = np.add if total is SC else np.maximum
    table = [np.asarray(head, dtype=float)]
    parent = []
    for _ in range(1, k):
        cand = combine(table[-1][:, None], between)
        arg = np.argmin(cand, axis=0)
        table.append(cand[arg, np.arange(F)])
        parent.append(arg)
    final = combine(table[-1], tail)
    j = int(np.argmin(final))
    if not np.isfinite(final[j]):
        raise KTooLarge(f"cannot place {k} facilities on {F} points")
    chosen = [j]
    for arg in reversed(parent):
        j = int(arg[j])
        chosen.append(j)
    return chosen[::-1]


def dp_opt_line(w: WeightedLineInstance, k: int, objective: Objective = SC) -> tuple:
    """Optimal ``k`` of the weighted points, by dynamic programming.

    Returns
    -------
    committee : tuple of int
        Candidate ids (``w.ids`` entries) in axis order.
    value : float
        Objective value of the committee on the weighted instance.

    Raises
    ------
    KTooLarge
        If ``k`` exceeds the number of points.
    """
    L = len(w)
    if not 1 <= k <= L:
        raise KTooLarge(f"k={k} but the weighted instance has {L} points")
    pos = w.positions
    chosen = _line_dp(pos, pos, np.asarray(w.weights, dtype=float), k, objective)
    value = weighted_cost(w, chosen, objective)
    return tuple(w.ids[i] for i in chosen), value


def weighted_cost(w: WeightedLineInstance, chosen_idx: Sequence[int], objective: Objective) -> float:
    """Objective of facilities at point indices ``chosen_idx`` on ``w``."""
    pos = w.positions
    d = np.abs(pos[:, None] - pos[list(chosen_idx)][None, :]).min(axis=1)
    if objective is SC:
        return float(np.dot(np.asarray(w.weights, dtype=float), d))
    return float(d.max())


def exact_opt(instance: Instance, k: int, objective: Objective = SC, subset=None) -> tuple:
    """Optimal ``k``-committee of ``instance`` (line DP).

    ``subset`` restricts the committee to the given candidate ids; the
    voters keep their true positions.
    """
    ids = np.arange(instance.m) if subset is None else np.array(sorted(set(int(c) for c in subset)))
    if not 1 <= k <= len(ids):
        raise KTooLarge(f"k={k} must lie in 1..{len(ids)}")
    chosen = _line_dp(instance.candidates[ids], instance.voters, np.ones(instance.n), k, objective)
    committee = tuple(sorted(int(ids[i]) for i in chosen))
    return committee, objective.of(cost(instance, committee))


def reference_greedy(instance: Instance, k: int, axis: CandidateAxis | None = None) -> tuple:
    """Farthest-first selection with full distance information.

    Starts from both axis extremes and repeatedly adds the candidate farthest
    from the current set; ties go to the leftmost candidate on ``axis``.

    Returns
    -------
    tuple of int
        Candidate ids in election order.
    """
    order = list(axis) if axis is not None else list(range(instance.m))
    x = instance.candidates[order]
    chosen = [0, len(order) - 1] if len(order) > 1 else [0]
    d = np.minimum(np.abs(x - x[0]), np.abs(x - x[-1]))
    while len(chosen) < k:
        j = int(np.argmax(d))
        chosen.append(j)
        d = np.minimum(d, np.abs(x - x[j]))
    return tuple(order[j] for j in chosen)


def distortion(rule_cost: float, opt_cost: float) -> float:
    """Cost ratio with the zero-optimum convention (1 if both vanish, else inf)."""
    if opt_cost == 0:
        return 1.0 if rule_cost == 0 else INF
    return rule_cost / opt_cost


@dataclass
class EvaluationReport:
    rule: str
    committee: tuple
    k: int
    sc_rule: float
    ec_rule: float
    sc_opt: float
    ec_opt: float
    dist_sc: float
    dist_ec: float
    q_regular: int = 0
    q_candidate: int = 0
    q_voter: int = 0
    gross: dict = field(default_factory=dict)
    q_gross_regular_equiv: int = 0
    regular_issued: int = 0
    runtime_ms: float = 0.0
    opt_committee_sc: tuple = ()
    opt_committee_ec: tuple = ()


def evaluate(instance: Instance, output, ledger=None, rule: str = "", runtime_ms: float = 0.0) -> EvaluationReport:
    """Compare a rule's committee with the exact optima.

    Parameters
    ----------
    output : RuleOutput or sequence of int
        The elected committee (anything with a ``committee`` attribute works).
    ledger : QueryLedger, optional
        Source of the query counts; defaults to the snapshot on ``output``.
    """
    committee = check_committee(getattr(output, "committee", output), instance.m)
    k = len(committee)
    rep = cost(instance, committee)
    opt_sc_c, opt_sc = exact_opt(instance, k, SC)
    opt_ec_c, opt_ec = exact_opt(instance, k, EC)
    report = EvaluationReport(
        rule=rule or getattr(output, "rule", ""),
        committee=committee,
        k=k,
        sc_rule=rep.social_cost,
        ec_rule=rep.egalitarian_cost,
        sc_opt=opt_sc,
        ec_opt=opt_ec,
        dist_sc=distortion(rep.social_cost, opt_sc),
        dist_ec=distortion(rep.egalitarian_cost, opt_ec),
        runtime_ms=runtime_ms,
        opt_committee_sc=opt_sc_c,
        opt_committee_ec=opt_ec_c,
    )
    if ledger is not None:
        report.q_regular = ledger.counts["regular"]
        report.q_candidate = ledger.counts["candidate"]
        report.q_voter = ledger.counts["voter"]
        report.gross = dict(ledger.gross_counts)
        report.q_gross_regular_equiv = ledger.gross_regular_equiv
        report.regular_issued = ledger.regular_issued
    elif getattr(output, "queries", None):
        q = output.queries
        report.q_regular, report.q_candidate, report.q_voter = (q.get(f"q_{t}", 0) for t in
                                                                ("regular", "candidate", "voter"))
        report.q_gross_regular_equiv = q.get("q_gross_regular_equiv", 0)
        report.regular_issued = q.get("regular_issued", 0)
    return report
