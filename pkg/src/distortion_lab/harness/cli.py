"""``distortion-lab {gen|run|sweep|verify}``.

Exit codes: 0 success, 2 bad arguments / I/O / unmet preconditions,
3 a violated guarantee or a failed verification suite.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..adversarial import FAMILIES, generate
from ..errors import DistortionLabError
from ..model import PLACEMENTS, active_candidates, load_instance, random_instance, save_instance
from ..rules import RULES, prepare
from .core import SweepConfig, format_rows, run_once, run_sweep, save_counterexample, write_csv
from .suites import SUITES, run_suites

EXIT_OK, EXIT_USAGE, EXIT_BOUND = 0, 2, 3

# Defaults applied after merging a --config file, so that explicit flags win.
DEFAULTS = {
    "seed": 0, "placement": "uniform", "D": 1000.0, "variant": 0, "trials": 20,
    "mode": "candidate", "scale": 1.0, "counterexamples": "counterexamples",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="distortion-lab", description="Query-metered committee elections on the line.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="JSON file whose keys mirror the flags")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out")

    g = sub.add_parser("gen", help="write an instance file")
    common(g)
    src = g.add_mutually_exclusive_group()
    src.add_argument("--family", choices=FAMILIES)
    src.add_argument("--random", action="store_true", help="sample a random instance")
    g.add_argument("--variant", type=int, help="query-lb variant j (0 = basic)")
    g.add_argument("--k", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--placement", choices=PLACEMENTS)
    g.add_argument("--active-only", action="store_true", default=None)
    g.add_argument("--eps", type=float)
    g.add_argument("--D", type=float)
    g.add_argument("--step", type=float, help="query-lb separator increment (default eps)")
    g.add_argument("--t", type=int)
    g.add_argument("--case")
    g.add_argument("--B", type=float)
    g.add_argument("--x", type=float)
    g.add_argument("--y", type=float)
    g.add_argument("--z", type=float)

    r = sub.add_parser("run", help="run one rule on an instance file")
    common(r)
    r.add_argument("instance", nargs="?")
    r.add_argument("--rule", choices=tuple(RULES))
    r.add_argument("--k", type=int)
    r.add_argument("--mode", choices=("candidate", "regular"), help="full-axis-dp gap queries")
    r.add_argument("--assert-bounds", action="store_true", default=None)
    r.add_argument("--counterexamples", help="directory for violating instances")

    s = sub.add_parser("sweep", help="run rules over random instances, write CSV")
    common(s)
    s.add_argument("--rule", help="comma-separated rule names")
    s.add_argument("--k", help="value, lo-hi or comma list")
    s.add_argument("--n")
    s.add_argument("--m")
    s.add_argument("--trials", type=int)
    s.add_argument("--placement", choices=PLACEMENTS)
    s.add_argument("--mode", choices=("candidate", "regular"))
    s.add_argument("--assert-bounds", action="store_true", default=None)
    s.add_argument("--counterexamples")

    v = sub.add_parser("verify", help="run invariant suites")
    common(v)
    v.add_argument("suite", nargs="?", choices=SUITES + ("all",), default=None)
    v.add_argument("--scale", type=float, help="multiply the number of trials")
    v.add_argument("--counterexamples")
    return p


def _merge_config(args):
    if getattr(args, "config", None):
        data = json.loads(Path(args.config).read_text())
        for key, value in data.items():
            dest = key.replace("-", "_")
            if dest == "rules":
                dest = "rule"
            if isinstance(value, list) and dest == "rule":
                value = ",".join(value)
            if getattr(args, dest, None) is None:
                setattr(args, dest, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _summary(inst) -> str:
    act = active_candidates(inst)
    try:
        axis = " ".join(str(c) for c in prepare(inst).axis.order)
    except DistortionLabError as exc:
        axis = f"unavailable ({exc.__class__.__name__})"
    return f"{inst.name}: n={inst.n} m={inst.m} active={int(act.sum())} axis=[{axis}]"


def cmd_gen(args) -> int:
    if args.random:
        if args.n is None or args.m is None:
            raise ValueError("--random needs --n and --m")
        inst = random_instance(args.seed, args.n, args.m, args.placement,
                               active_only=bool(args.active_only))
        inst = inst.with_name(f"{inst.name}:seed={args.seed}")
    elif args.family:
        params = {key: getattr(args, key) for key in ("k", "n", "D", "eps", "step", "t", "case", "B", "x", "y", "z")
                  if getattr(args, key, None) is not None}
        params["j"] = args.variant
        inst = generate(args.family, **params)
    else:
        raise ValueError("gen needs --family or --random")
    out = args.out or "instance.json"
    save_instance(inst, out)
    print(_summary(inst))
    print(f"wrote {out}")
    return EXIT_OK


def cmd_run(args) -> int:
    if not args.instance:
        raise ValueError("run needs an instance file")
    if not args.rule:
        raise ValueError("run needs --rule")
    inst = load_instance(args.instance)
    opts = {"mode": args.mode} if args.rule == "full-axis-dp" else {}
    res = run_once(inst, args.rule, args.k, instance_id=Path(args.instance).stem, **opts)
    rep = res.report
    print(f"rule {res.rule} on {res.instance_id} ({res.family}, n={res.n}, m={res.m}, k={rep.k})")
    print(f"  committee      {list(rep.committee)}")
    print(f"  social cost    {rep.sc_rule:.12g}  optimum {rep.sc_opt:.12g}  distortion {rep.dist_sc:.12g}")
    print(f"  egalitarian    {rep.ec_rule:.12g}  optimum {rep.ec_opt:.12g}  distortion {rep.dist_ec:.12g}")
    print(f"  queries        regular={rep.q_regular} candidate={rep.q_candidate} voter={rep.q_voter}"
          f" gross-regular-equiv={rep.q_gross_regular_equiv}")
    text = format_rows([res.row()])
    print(text, end="")
    if args.out:
        Path(args.out).write_text(text)
    if args.assert_bounds and res.violations:
        path = save_counterexample(inst, args.counterexamples, f"{res.instance_id}-{res.rule}")
        for msg in res.violations:
            print(f"BOUND VIOLATED: {msg}", file=sys.stderr)
        print(f"counterexample saved to {path}", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def cmd_sweep(args) -> int:
    fields = {"rules": args.rule, "k": args.k, "n": args.n, "m": args.m, "trials": args.trials,
              "seed": args.seed, "placement": args.placement, "out": args.out, "mode": args.mode}
    config = SweepConfig(**{key: v for key, v in fields.items() if v is not None})
    rows, failures = run_sweep(config, counterexample_dir=args.counterexamples)
    path = write_csv(rows, config.out)
    print(f"wrote {len(rows)} rows to {path}")
    if failures:
        print(f"{len(failures)} run(s) broke a guarantee; instances saved under {args.counterexamples}",
              file=sys.stderr)
        if args.assert_bounds:
            return EXIT_BOUND
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suites(args.suite or "all", seed=args.seed, scale=args.scale)
    ok = True
    for res in results:
        print(res.line())
        if not res.passed:
            ok = False
            if res.counterexample is not None:
                path = save_counterexample(res.counterexample, args.counterexamples, f"verify-{res.name}")
                print(f"  counterexample saved to {path}")
    print("verify:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_BOUND


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _merge_config(args)
        return COMMANDS[args.command](args)
    except (DistortionLabError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
