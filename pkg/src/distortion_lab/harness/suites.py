"""Invariant suites behind ``distortion-lab verify``.

Each suite draws its instances from ``SeedSequence(seed)``, checks one
module against an independent ground-truth computation and stops at the
first counterexample, which the caller may persist for replay.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..adversarial import check_indistinguishable, far_pair_penalty, gen_query_lb
from ..axis import WeightedLineInstance, is_single_peaked
from ..errors import UnknownName
from ..exact import EC, SC, brute_force_opt, dp_opt_line, evaluate, exact_opt, reference_greedy
from ..model import Instance, random_instance
from ..rules import distant_candidate, partition_interval, prepare, rule_coreset, rule_greedy

SUITES = ("oracle", "axis", "greedy", "coreset", "lower-bounds", "exact")
TOL = 1e-9

#: Separator increment that keeps every query-lb variant profile-identical.
SEPARATED_STEP = 3000.5


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    message: str = ""
    counterexample: Instance | None = None
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: {self.checked} checks in {self.seconds:.2f}s"
        return text + (f" ({self.message})" if self.message else "")


class _Fail(Exception):
    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


def _rngs(seed, count):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _close(a, b):
    return abs(a - b) <= TOL * max(1.0, abs(a), abs(b))


def _random(rng, k_lo=3, k_hi=8, m_hi=20, n_hi=40, active_only=True):
    k = int(rng.integers(k_lo, k_hi + 1))
    m = int(rng.integers(k + 1, max(k + 1, m_hi) + 1))
    n_lo = max(k + 1, m if active_only else 2)
    n = int(rng.integers(n_lo, max(n_lo, n_hi) + 1))
    inst = random_instance(int(rng.integers(2**63)), n, m, "uniform", active_only=active_only)
    return inst, k


# suites ---------------------------------------------------------------------

def suite_oracle(seed=0, scale=1.0):
    """Simulated voter and candidate answers equal true distances, within cost."""
    checked = 0
    for rng in _rngs(seed, max(1, int(100 * scale))):
        inst, _ = _random(rng, k_lo=2, k_hi=2, m_hi=20, n_hi=40)
        e = prepare(inst)
        o = e.oracle
        for _ in range(50):
            if rng.random() < 0.5:
                v, w = (int(x) for x in rng.integers(0, inst.n, 2))
                truth = abs(inst.voters[v] - inst.voters[w])
                before = o.ledger.regular_issued
                got, cap = o.voter_query(v, w), 2
            else:
                c, d = (int(x) for x in rng.choice(inst.m, 2, replace=False))
                truth = abs(inst.candidates[c] - inst.candidates[d])
                before = o.ledger.regular_issued
                got, cap = o.candidate_query(c, d), 6
            used = o.ledger.regular_issued - before
            if not _close(got, truth):
                raise _Fail(f"simulated {got!r} != true {truth!r}", inst)
            if used > cap:
                raise _Fail(f"{used} regular queries for one simulation (cap {cap})", inst)
            checked += 1
    return checked


def suite_axis(seed=0, scale=1.0):
    """Recovered axis equals the true order up to reversal and is single-peaked."""
    checked = 0
    for i, rng in enumerate(_rngs(seed, max(1, int(500 * scale)))):
        m = int(rng.integers(3, 31))
        n = int(rng.integers(2, 60))
        placement = ("uniform", "clustered", "collocated")[i % 3]
        inst = random_instance(int(rng.integers(2**63)), n, m, placement)
        e = prepare(inst)
        truth = tuple(range(m))
        if e.axis.order not in (truth, truth[::-1]):
            raise _Fail(f"axis {e.axis.order} is not the true order", inst)
        if not is_single_peaked(e.profile, e.axis):
            raise _Fail("recovered axis fails the single-peaked check", inst)
        checked += 1
    return checked


def suite_greedy(seed=0, scale=1.0):
    """Greedy matches full-information greedy, stays in budget and in its bounds."""
    checked = 0
    for rng in _rngs(seed, max(1, int(200 * scale))):
        inst, k = _random(rng)
        e = prepare(inst)
        out = rule_greedy(e.profile, e.axis, e.clusters, e.oracle, k)
        ref = tuple(sorted(reference_greedy(inst, k)))
        if out.committee != ref:
            raise _Fail(f"committee {out.committee} != reference {ref}", inst)
        q = e.oracle.ledger.counts["candidate"]
        if q > 6 * k - 15:
            raise _Fail(f"{q} candidate queries > 6k-15 = {6 * k - 15}", inst)
        rep = evaluate(inst, out)
        if rep.dist_ec > 5 * (1 + TOL) or rep.dist_sc > 5 * inst.n * (1 + TOL):
            raise _Fail(f"distortion sc={rep.dist_sc:.6g} ec={rep.dist_ec:.6g}", inst)
        # Distant-Candidate on a random interval against brute force
        lo, hi = sorted(int(x) for x in rng.choice(inst.m, 2, replace=False))
        if hi - lo >= 2:
            f = distant_candidate(lo, hi, e.profile, e.axis, e.clusters, prepare(inst).oracle)
            x = inst.candidates
            inner = range(lo + 1, hi)
            best = max(inner, key=lambda c: min(x[c] - x[lo], x[hi] - x[c]))
            if f.candidate != best:
                raise _Fail(f"distant candidate {f.candidate} != {best} on [{lo}, {hi}]", inst)
        checked += 1
    return checked


def suite_coreset(seed=0, scale=1.0):
    """Coreset rule: good set within factor 2, distortion 5, interval cap, query ceiling."""
    checked = 0
    for rng in _rngs(seed, max(1, int(100 * scale))):
        inst, k = _random(rng, k_lo=3, k_hi=6, m_hi=60, n_hi=120)
        e = prepare(inst)
        out = rule_coreset(e.profile, e.axis, e.clusters, e.oracle, k)
        art = out.artifacts
        _, opt = exact_opt(inst, k, SC)
        _, best_good = exact_opt(inst, k, SC, subset=art["good_set"])
        if best_good > 2 * opt * (1 + TOL) + TOL:
            raise _Fail(f"good set costs {best_good:.6g} > 2 * {opt:.6g}", inst)
        rep = evaluate(inst, out)
        if rep.dist_sc > 5 * (1 + TOL):
            raise _Fail(f"coreset distortion {rep.dist_sc:.6g} > 5", inst)
        if len(art["partition"]) > art["interval_cap"] + 1:
            raise _Fail(f"{len(art['partition'])} intervals exceed the cap", inst)
        q = e.oracle.ledger.counts["candidate"]
        if q > art["query_ceiling"]:
            raise _Fail(f"{q} candidate queries > ceiling {art['query_ceiling']}", inst)
        # Partitioning on a random interval against the true midpoint
        lo, hi = sorted(int(x) for x in rng.choice(inst.m, 2, replace=False))
        if hi - lo >= 3:
            left, right = partition_interval(lo, hi, e.profile, e.axis, e.clusters, prepare(inst).oracle)
            x = inst.candidates
            mid = (x[lo] + x[hi]) / 2
            cl = max(c for c in range(lo, hi + 1) if x[c] <= mid)
            got = (e.axis[left.hi], e.axis[right.lo])
            if tuple(sorted(got)) != (cl, cl + 1):
                raise _Fail(f"partition split at {got}, true straddle ({cl}, {cl + 1})", inst)
        checked += 1
    return checked


def suite_lower_bounds(seed=0, scale=1.0):
    """Query lower-bound family: optimum, far-pair penalty and indistinguishability.

    The unit-pair optimum and the far-pair penalty are checked on the
    construction as written.  Profile equality across variants is checked on
    the separated family (separators growing by ``SEPARATED_STEP``); the
    eps-separated construction keeps rankings fixed only for ``k = 3``.
    """
    checked = 0
    D = 1000.0
    for k in (3, 4, 5, 6):
        for step in (None, SEPARATED_STEP):
            variants = [gen_query_lb(k, D, j=j, step=step) for j in range(2 * k - 1)]
            for j, inst in enumerate(variants):
                # voters sit on the candidates, so each carries unit weight
                w = WeightedLineInstance(tuple(range(inst.m)), (1,) * inst.m,
                                         tuple(np.diff(inst.candidates)))
                _, sc = dp_opt_line(w, k, SC)
                _, ec = dp_opt_line(w, k, EC)
                if not (_close(sc, k - 2) and _close(ec, 1.0)):
                    raise _Fail(f"k={k} j={j}: optimum SC={sc:.12g} EC={ec:.12g}", inst)
                if j:
                    pen = far_pair_penalty(inst, k)
                    if pen < D:
                        raise _Fail(f"k={k} j={j}: far-pair penalty {pen:.6g} < D", inst)
                checked += 1
            if step is not None or k == 3:
                same, witness = check_indistinguishable(variants)
                if not same:
                    raise _Fail(f"k={k}: variant profiles differ at {witness}", variants[witness[0]])
                checked += 1
    return checked


def suite_exact(seed=0, scale=1.0):
    """Line DP equals brute force on small weighted instances, both objectives."""
    checked = 0
    for rng in _rngs(seed, max(1, int(500 * scale))):
        F = int(rng.integers(2, 13))
        k = int(rng.integers(1, min(5, F) + 1))
        w = WeightedLineInstance(
            tuple(range(F)),
            tuple(int(x) for x in rng.integers(1, 6, F)),
            tuple(float(g) for g in rng.uniform(0.1, 10.0, F - 1)),
        )
        inst = w.to_instance(name="weighted")
        for obj in (SC, EC):
            _, dp_val = dp_opt_line(w, k, obj)
            _, bf_val = brute_force_opt(inst, k, obj)
            if not _close(dp_val, bf_val):
                raise _Fail(f"{obj.value}: dp {dp_val!r} != brute force {bf_val!r} (k={k})", inst)
        checked += 1
    return checked


_RUNNERS = {
    "oracle": suite_oracle,
    "axis": suite_axis,
    "greedy": suite_greedy,
    "coreset": suite_coreset,
    "lower-bounds": suite_lower_bounds,
    "exact": suite_exact,
}


def run_suite(name: str, seed: int = 0, scale: float = 1.0) -> SuiteResult:
    """Run one named suite and capture its first counterexample."""
    if name not in _RUNNERS:
        raise UnknownName(f"unknown suite {name!r}; known: {', '.join(SUITES)}, all")
    start = time.perf_counter()
    try:
        checked = _RUNNERS[name](seed, scale)
        res = SuiteResult(name, True, checked)
    except _Fail as exc:
        res = SuiteResult(name, False, 0, str(exc), exc.instance)
    res.seconds = time.perf_counter() - start
    return res


def run_suites(names, seed: int = 0, scale: float = 1.0) -> list:
    if isinstance(names, str):
        names = SUITES if names == "all" else (names,)
    return [run_suite(n, seed, scale) for n in names]


__all__ = ["SUITES", "SEPARATED_STEP", "SuiteResult", "run_suite", "run_suites"] + [
    f"suite_{n.replace('-', '_')}" for n in SUITES
]
