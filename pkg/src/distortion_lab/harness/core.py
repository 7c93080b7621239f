"""Running rules on instances, checking their guarantees, writing CSV rows."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..errors import BadParams, UnknownName
from ..exact import EvaluationReport, evaluate
from ..model import PLACEMENTS, Instance, random_instance, save_instance
from ..rules import RULES, prepare, run_rule

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "instance_id", "family", "rule", "k", "n", "m",
    "q_regular", "q_candidate", "q_voter", "q_gross_regular_equiv",
    "sc_rule", "sc_opt", "dist_sc", "ec_rule", "ec_opt", "dist_ec", "runtime_ms",
)

#: Rules that always elect two candidates.
FIXED_K = {"extremes2": 2, "median2": 2, "two-of-three": 2}
#: Smallest committee size accepted by the other rules.
MIN_K = {"greedy": 2, "full-axis-dp": 1, "coreset": 3}

BOUND_RTOL = 1e-9
THREADS_ENV = "DISTORTION_LAB_THREADS"


def thread_count(default: int = 1) -> int:
    """Concurrency cap from ``DISTORTION_LAB_THREADS`` (at least one)."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw)) if raw else default
    except ValueError:
        raise BadParams(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def family_of(instance: Instance) -> str:
    return instance.name.split(":", 1)[0] if instance.name else "unnamed"


# bounds ---------------------------------------------------------------------

def _exceeds(value: float, bound: float) -> bool:
    return value > bound * (1 + BOUND_RTOL) + 1e-12


def bound_violations(rule: str, report: EvaluationReport, n: int, artifacts: dict | None = None) -> list:
    """Guarantees of ``rule`` that ``report`` breaks, as readable strings."""
    k = report.k
    checks = []
    if rule == "extremes2":
        checks.append(("dist_sc", report.dist_sc, 2 * n - 2))
    elif rule == "median2":
        checks.append(("dist_sc", report.dist_sc, n + 1))
    elif rule == "two-of-three":
        checks.append(("dist_sc", report.dist_sc, 3))
    elif rule == "greedy":
        checks += [("dist_sc", report.dist_sc, 5 * n), ("dist_ec", report.dist_ec, 5)]
        checks.append(("q_candidate", report.q_candidate, max(6 * k - 15, 0)))
    elif rule == "full-axis-dp":
        checks.append(("dist_sc", report.dist_sc, 3))
    elif rule == "coreset":
        checks.append(("dist_sc", report.dist_sc, 5))
        if artifacts and "query_ceiling" in artifacts:
            checks.append(("q_candidate", report.q_candidate, artifacts["query_ceiling"]))
    return [f"{name} = {value:.12g} exceeds {bound:.12g}" for name, value, bound in checks
            if _exceeds(value, bound)]


# single runs ----------------------------------------------------------------

@dataclass
class RunResult:
    instance_id: str
    family: str
    rule: str
    report: EvaluationReport
    artifacts: dict
    n: int
    m: int
    violations: list = field(default_factory=list)

    def row(self) -> dict:
        r = self.report
        return {
            "instance_id": self.instance_id, "family": self.family, "rule": self.rule,
            "k": r.k, "n": self.n, "m": self.m,
            "q_regular": r.q_regular, "q_candidate": r.q_candidate, "q_voter": r.q_voter,
            "q_gross_regular_equiv": r.q_gross_regular_equiv,
            "sc_rule": r.sc_rule, "sc_opt": r.sc_opt, "dist_sc": r.dist_sc,
            "ec_rule": r.ec_rule, "ec_opt": r.ec_opt, "dist_ec": r.dist_ec,
            "runtime_ms": r.runtime_ms,
        }


def run_once(instance: Instance, rule: str, k: int | None = None, *, instance_id: str = "",
             family: str | None = None, **options) -> RunResult:
    """Execute ``rule`` through a fresh oracle and evaluate it against the optima."""
    if rule not in RULES:
        raise UnknownName(f"unknown rule {rule!r}; known: {', '.join(RULES)}")
    k = FIXED_K.get(rule, k)
    start = time.perf_counter()
    election = prepare(instance)
    out = run_rule(rule, election, k, **options)
    elapsed = (time.perf_counter() - start) * 1e3
    report = evaluate(instance, out, election.oracle.ledger, rule=rule, runtime_ms=elapsed)
    res = RunResult(instance_id or instance.name or "instance", family or family_of(instance), rule,
                    report, out.artifacts, instance.n, instance.m)
    res.violations = bound_violations(rule, report, instance.n, out.artifacts)
    return res


# CSV ------------------------------------------------------------------------

def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isinf(v):
            return "inf"
        return f"{v:.12g}"
    return str(value)


def format_rows(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(rows, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_rows(rows))
    return path


def save_counterexample(instance: Instance, directory, stem: str) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in stem)
    return save_instance(instance, directory / f"{safe}.json")


# sweeps ---------------------------------------------------------------------

def parse_range(value) -> tuple:
    """``5``, ``"3-8"``, ``"3,5,7"`` or ``[3, 8]`` (inclusive bounds) to a tuple of ints."""
    if isinstance(value, (int, np.integer)):
        return (int(value),)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise BadParams(f"range list must be [lo, hi], got {value!r}")
        lo, hi = int(value[0]), int(value[1])
    else:
        text = str(value).strip()
        if "," in text:
            return tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
        else:
            return (int(text),)
    if lo > hi:
        raise BadParams(f"empty range {lo}-{hi}")
    return tuple(range(lo, hi + 1))


@dataclass
class SweepConfig:
    """Everything needed to reproduce a sweep; JSON files mirror the CLI flags."""

    rules: tuple = ("greedy", "coreset")
    k: tuple = (3, 4)
    n: tuple = (10, 40)
    m: tuple = (8, 20)
    trials: int = 20
    seed: int = 0
    placement: str = "uniform"
    out: str = "sweep.csv"
    active_only: bool = True
    mode: str = "candidate"

    def __post_init__(self):
        if isinstance(self.rules, str):
            self.rules = tuple(r.strip() for r in self.rules.split(",") if r.strip())
        self.rules = tuple(self.rules)
        self.k, self.n, self.m = parse_range(self.k), parse_range(self.n), parse_range(self.m)
        self.validate()

    def validate(self):
        if not (self.rules and self.k and self.n and self.m):
            raise BadParams("rules and the k, n, m ranges must be nonempty")
        for r in self.rules:
            if r not in RULES:
                raise UnknownName(f"unknown rule {r!r}; known: {', '.join(RULES)}")
        if self.placement not in PLACEMENTS:
            raise BadParams(f"placement must be one of {PLACEMENTS}")
        if self.trials < 1:
            raise BadParams("trials must be positive")
        k_max = max(FIXED_K.get(r, max(self.k)) for r in self.rules)
        k_min = min(self.k)
        if k_max + 1 > min(self.m) and any(r not in FIXED_K for r in self.rules):
            raise BadParams(f"need k + 1 <= min(m): k up to {max(self.k)}, m from {min(self.m)}")
        if max(self.n) < k_max + 1:
            raise BadParams("need n >= k + 1")
        for r in self.rules:
            if r in MIN_K and k_min < MIN_K[r]:
                raise BadParams(f"rule {r} needs k >= {MIN_K[r]}")
        if "two-of-three" in self.rules and self.m != (3,):
            raise BadParams("two-of-three needs m = 3")
        if self.active_only and max(self.n) < min(self.m):
            raise BadParams("active-only instances need n >= m")

    @classmethod
    def from_json(cls, path, **overrides) -> "SweepConfig":
        data = json.loads(Path(path).read_text())
        if "rule" in data:
            data["rules"] = data.pop("rule")
        data.update({key: v for key, v in overrides.items() if v is not None})
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise BadParams(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Trial:
    instance_id: str
    instance: Instance
    k: int


def draw_trials(config: SweepConfig) -> list:
    """Instances of a sweep, each from its own child of ``SeedSequence(seed)``."""
    children = np.random.SeedSequence(config.seed).spawn(config.trials)
    trials = []
    for t, child in enumerate(children):
        rng = np.random.default_rng(child)
        k = int(rng.choice(config.k))
        m_ok = [m for m in config.m if m >= k + 1] or list(config.m)
        m = int(rng.choice(m_ok))
        n_floor = max(k + 1, m if config.active_only else 0)
        n_ok = [n for n in config.n if n >= n_floor] or [n_floor]
        n = int(rng.choice(n_ok))
        seed = int(rng.integers(2**63))
        inst = random_instance(seed, n, m, config.placement, active_only=config.active_only)
        trials.append(Trial(f"random-{t:05d}", inst, k))
    return trials


def run_sweep(config: SweepConfig, threads: int | None = None, counterexample_dir=None) -> tuple:
    """Run every rule on every trial.

    Returns
    -------
    rows : list of dict
        Sorted by ``(instance_id, rule)`` whatever the completion order.
    failures : list of RunResult
        Runs that broke a guarantee; their instances are saved for replay.
    """
    threads = thread_count() if threads is None else threads
    trials = draw_trials(config)
    jobs = [(t, r) for t in trials for r in config.rules]

    def work(job):
        trial, rule = job
        opts = {"mode": config.mode} if rule == "full-axis-dp" else {}
        return trial, run_once(trial.instance, rule, trial.k, instance_id=trial.instance_id,
                               family="random", **opts)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(j) for j in jobs]
    rows, failures = [], []
    for trial, res in results:
        rows.append(res.row())
        if res.violations:
            failures.append(res)
            if counterexample_dir is not None:
                path = save_counterexample(trial.instance, counterexample_dir,
                                           f"{res.instance_id}-{res.rule}")
                log.warning("%s/%s: %s (saved %s)", res.instance_id, res.rule,
                            "; ".join(res.violations), path)
    rows.sort(key=lambda r: (r["instance_id"], r["rule"]))
    return rows, failures
