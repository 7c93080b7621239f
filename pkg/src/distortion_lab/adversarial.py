"""Worst-case instance families.

* ``query-lb``: ``k - 1`` isolated candidate pairs where one hidden pair is
  far apart; all ``2(k - 1)`` variants share one ranking profile.
* ``2fac-lb`` and ``3fac-lb``: small four-candidate constructions showing
  that purely ordinal rules are weak.
* Tightness instances on which specific rules hit their worst ratio.

Small parameters ``eps`` break ties; the instances satisfy the tie-free
requirement for every positive ``eps`` in the documented ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import BadInstance, BadParams, ShapeMismatch, UnknownName
from .model import Instance, derive_profile

DEFAULT_D = 1000.0
DEFAULT_EPS = 1e-6


def _fmt(params: dict) -> str:
    return ":".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in params.items())


@dataclass(frozen=True)
class FamilySpec:
    """A named family with its parameters; ``build()`` produces the instance."""

    family: str
    params: dict = field(default_factory=dict)

    def build(self) -> Instance:
        return generate(self.family, **self.params)


# query lower bound ----------------------------------------------------------

def _separators(k, D, eps, step):
    inc = eps if step is None else step
    return [1.0 if i % 2 else D * D + (i // 2 - 1) * inc for i in range(1, 2 * (k - 1))]


def query_lb_positions(k: int, D: float = DEFAULT_D, eps: float | None = None, j: int = 0,
                       step: float | None = None) -> np.ndarray:
    """Candidate locations of variant ``j`` (0 is the basic instance).

    Odd ``j`` moves the 1-based candidate ``c_j`` left by ``D``; even ``j``
    moves it right by ``D``.  Separators grow by ``eps`` per pair unless
    ``step`` overrides the increment.  With the ``eps`` increment the
    variants are only profile-identical for ``k = 3``; an increment of about
    ``3 D`` keeps every ranking fixed for all ``k`` with ``k * step << D**2``.
    """
    eps = 1e-3 / k if eps is None else eps
    _check_query_lb(k, D, eps, j, step)
    pos = np.concatenate([[0.0], np.cumsum(_separators(k, D, eps, step))])
    if j:
        pos[j - 1] += -D if j % 2 else D
    return pos


def query_lb_gaps(k: int, D: float = DEFAULT_D, eps: float | None = None, j: int = 0,
                  step: float | None = None) -> list:
    """Consecutive candidate gaps of variant ``j``, computed without rounding drift."""
    eps = 1e-3 / k if eps is None else eps
    _check_query_lb(k, D, eps, j, step)
    gaps = _separators(k, D, eps, step)
    if j:
        shift = -D if j % 2 else D
        if j >= 2:
            gaps[j - 2] += shift
        if j - 1 < len(gaps):
            gaps[j - 1] -= shift
    return gaps


def _check_query_lb(k, D, eps, j, step=None):
    if k < 3:
        raise BadParams("query-lb needs k >= 3")
    if D < 50 or D * D < 100 * (2 * D + 1 + k):
        raise BadParams(f"D={D} too small: need D >= 50 and D^2 >= 100 (2D + 1 + k)")
    if not 0 < eps < 1 / k:
        raise BadParams(f"eps={eps} must lie in (0, 1/k)")
    if not 0 <= j <= 2 * (k - 1):
        raise BadParams(f"variant j={j} must lie in 0..{2 * (k - 1)}")
    if step is not None and not 0 < step * k < D * D / 10:
        raise BadParams(f"step={step} must be positive and small against D^2")


def gen_query_lb(k: int, D: float = DEFAULT_D, eps: float | None = None, j: int = 0,
                 step: float | None = None) -> Instance:
    """Variant ``j`` of the query lower-bound family, voters on the candidates."""
    eps = 1e-3 / k if eps is None else eps
    pos = query_lb_positions(k, D, eps, j, step)
    params = {"k": k, "D": float(D), "eps": float(eps), "j": j}
    if step is not None:
        params["step"] = float(step)
    name = "query-lb:" + _fmt(params)
    return Instance(pos, pos.copy(), name=name)


def far_pair(instance: Instance) -> tuple:
    """The pair ``(2i, 2i + 1)`` whose gap exceeds the unit pair distance."""
    gaps = np.diff(instance.candidates)
    for i in range(0, instance.m - 1, 2):
        if gaps[i] > 1.5:
            return (i, i + 1)
    raise BadInstance("no far pair: not a query-lb variant with j >= 1")


def far_pair_penalty(instance: Instance, k: int) -> float:
    """Cheapest social cost among ``k``-committees missing a far-pair member."""
    a, b = far_pair(instance)
    dist = instance.distance_matrix()
    best = np.inf
    for S in combinations(range(instance.m), k):
        if a in S and b in S:
            continue
        best = min(best, float(dist[:, S].min(axis=1).sum()))
    return best


# two-member lower bound -----------------------------------------------------

TWO_FAC_CASES = ("ab", "ac", "ad", "bc", "bd", "cd")


def gen_2fac_lb(t: int, x: float | None = None, y: float | None = None, z: float | None = None,
                case: str = "ab", eps: float = DEFAULT_EPS) -> Instance:
    """Four candidates ``a < b < c < d`` at gaps ``x, y, z`` and ``2t + 2`` voters.

    ``t`` voters rank ``b c d a``, ``t`` rank ``c d b a``, one ranks ``a b c d``
    and one ranks ``d c b a``.  For cases containing ``a`` the defaults are
    ``x = 1 + 2 eps, y = 1, z = eps`` and the ``a`` voter sits at ``1/2``;
    otherwise ``x = 100, y = 2, z = 1`` and every voter sits on her favourite.
    """
    if case not in TWO_FAC_CASES:
        raise BadParams(f"case must be one of {TWO_FAC_CASES}")
    if t < 1:
        raise BadParams("t must be at least 1")
    with_a = "a" in case
    dx, dy, dz = (1 + 2 * eps, 1.0, eps) if with_a else (100.0, 2.0, 1.0)
    x = dx if x is None else float(x)
    y = dy if y is None else float(y)
    z = dz if z is None else float(z)
    if not (x >= y + z and y >= z and z > 0):
        raise BadParams("need x >= y + z, y >= z > 0")
    cands = np.array([0.0, x, x + y, x + y + z])
    a_voter = 0.5 if with_a else 0.0
    voters = np.array([cands[1]] * t + [cands[2]] * t + [a_voter, cands[3]])
    inst = Instance(cands, voters, name="2fac-lb:" + _fmt({"t": t, "x": x, "y": y, "z": z, "case": case}))
    expected = [(1, 2, 3, 0)] * t + [(2, 3, 1, 0)] * t + [(0, 1, 2, 3), (3, 2, 1, 0)]
    try:
        got = [tuple(r) for r in derive_profile(inst).rankings.tolist()]
    except Exception as exc:
        raise BadParams(f"parameters produce ties: {exc}") from None
    if got != expected:
        raise BadParams("parameters do not produce the four ranking groups")
    return inst


# three-member lower bound ---------------------------------------------------

def gen_3fac_lb(B: float = 100.0, eps: float = DEFAULT_EPS) -> Instance:
    """``a, b, c, d`` with ``d(a,b) = B``, ``d(b,c) = B + eps``, ``d(c,d) = 1``; voters on candidates."""
    if B < 10:
        raise BadParams("B must be at least 10")
    if not 0 < eps < 1:
        raise BadParams("eps must lie in (0, 1)")
    cands = np.array([0.0, B, 2 * B + eps, 2 * B + eps + 1])
    return Instance(cands, cands.copy(), name="3fac-lb:" + _fmt({"B": float(B), "eps": float(eps)}))


# tightness instances --------------------------------------------------------

TIGHTNESS = (
    "extremes-tight", "median-tight", "greedy-remark", "greedy-remark-medianized",
    "two-of-three-lb-a", "two-of-three-lb-b", "two-of-three-lb-c",
)

#: Committee of interest for each tightness instance (candidate ids).
TIGHTNESS_COMMITTEES = {
    "extremes-tight": (0, 2),
    "median-tight": (0, 2),
    "greedy-remark": (0, 3, 4),
    "greedy-remark-medianized": (1, 3, 4),
    "two-of-three-lb-a": (1, 2),
    "two-of-three-lb-b": (0, 2),
    "two-of-three-lb-c": (0, 1),
}


def gen_tightness(name: str, n: int | None = None, eps: float = DEFAULT_EPS,
                  x: float = 100.0, B: float = 100.0) -> Instance:
    """Named instance on which a rule (or every rule) meets its bound.

    ``eps = 0`` is accepted and yields the limiting instance, which may
    contain ties (fine for cost evaluation, rejected by ``derive_profile``).
    """
    if eps < 0:
        raise BadParams("eps must be non-negative")
    if name == "extremes-tight":
        n = 5 if n is None else n
        if n < 3:
            raise BadParams("extremes-tight needs n >= 3")
        cands = [0.0, 2.0, x]
        voters = [1 - eps] + [2.0] * (n - 2) + [x]
    elif name == "median-tight":
        n = 8 if n is None else n
        if n < 4 or n % 2:
            raise BadParams("median-tight needs an even n >= 4")
        cands = [0.0, 1 + eps, 2 + eps]
        voters = [0.5, 1.0] + [1 + eps] * (n // 2 - 1) + [2 + eps] * (n // 2 - 1)
    elif name in ("greedy-remark", "greedy-remark-medianized"):
        n = 10 if n is None else n
        if n < 6 or n % 2:
            raise BadParams("greedy-remark needs an even n >= 6")
        cands = [0.0, 1.0, 2 + eps, 4 + 3 * eps, 8 + 4 * eps]
        counts = [1, n // 2 - 1, n // 2 - 2, 1, 1]
        voters = [c for c, r in zip(cands, counts) for _ in range(r)]
    elif name == "two-of-three-lb-a":
        cands = [0.0, B, B + 1]
        voters = list(cands)
    elif name == "two-of-three-lb-b":
        cands = [0.0, 2.0, 4.0]
        voters = [0.0, 2 + eps / 2, 3 + eps]
    elif name == "two-of-three-lb-c":
        cands = [0.0, 2.0, 4.0]
        voters = [0.0, 3 - eps, 4.0]
    else:
        raise UnknownName(f"unknown tightness instance {name!r}; known: {', '.join(TIGHTNESS)}")
    params = {"n": len(voters), "eps": float(eps)}
    return Instance(np.array(cands), np.array(voters), name=f"{name}:" + _fmt(params))


# indistinguishability -------------------------------------------------------

def check_indistinguishable(instances) -> tuple:
    """Whether all instances induce the same ranking profile.

    Returns
    -------
    same : bool
    witness : tuple or None
        ``(instance index, voter, rank)`` of the first difference.
    """
    instances = list(instances)
    if not instances:
        return True, None
    shape = (instances[0].n, instances[0].m)
    if any((i.n, i.m) != shape for i in instances):
        raise ShapeMismatch("instances differ in n or m")
    ref = derive_profile(instances[0]).rankings
    for idx, inst in enumerate(instances[1:], start=1):
        diff = np.argwhere(derive_profile(inst).rankings != ref)
        if diff.size:
            v, r = diff[0]
            return False, (idx, int(v), int(r))
    return True, None


# dispatch -------------------------------------------------------------------

FAMILIES = ("query-lb", "2fac-lb", "3fac-lb") + TIGHTNESS


def generate(family: str, **params) -> Instance:
    """Build an instance of ``family`` from keyword parameters (CLI entry point)."""
    if family == "query-lb":
        return gen_query_lb(params["k"], params.get("D", DEFAULT_D), params.get("eps"),
                            params.get("j", params.get("variant", 0)), params.get("step"))
    if family == "2fac-lb":
        return gen_2fac_lb(params.get("t", 1), params.get("x"), params.get("y"), params.get("z"),
                           params.get("case", "ab"), params.get("eps", DEFAULT_EPS))
    if family == "3fac-lb":
        return gen_3fac_lb(params.get("B", 100.0), params.get("eps", DEFAULT_EPS))
    if family in TIGHTNESS:
        keep = {k: v for k, v in params.items() if k in ("n", "eps", "x", "B") and v is not None}
        return gen_tightness(family, **keep)
    raise UnknownName(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")

