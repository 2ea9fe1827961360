"""Command-line front end: ``strrecon run|exhaustive|montecarlo|expect|verify``."""

from __future__ import annotations

import argparse
import json
import sys

from .average import reconstruct_average
from .basic import basic
from .bitstr import longest_zero_run
from .corpus import trial_seed
from .harness import ALGOS, ExperimentConfig, hidden_for, run_experiment
from .oracle import Oracle
from .randomized import double_seed


def _common(p: argparse.ArgumentParser, *, trials: bool = True, family: bool = True) -> None:
    p.add_argument("--algo", choices=ALGOS, default="randomized")
    p.add_argument("--n", type=int, required=True, help="length of the hidden string")
    if trials:
        p.add_argument("--trials", type=int, default=None)
    if family:
        p.add_argument("--family", default="random",
                       help="corpus family, e.g. random, periodic:011:2, runlength:4, mixed")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--c1", type=int, default=None)
    p.add_argument("--c2", type=int, default=None)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--q", type=int, default=None, help="override the main-loop length target")
    p.add_argument("--r0", type=float, default=None, help="override the sampling rate")
    p.add_argument("--whitebox", action="store_true", help="enable internal soundness assertions")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--bound", type=float, default=None,
                   help="flag runs with more than n + BOUND queries (randomized)")
    p.add_argument("--max-exceed", type=float, default=0.01,
                   help="tolerated fraction of runs above the bound")
    p.add_argument("--csv", default=None, metavar="PATH")
    p.add_argument("--json", default=None, metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strrecon",
                                     description="Reconstruct hidden binary strings from substring queries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="reconstruct one string and print the outcome")
    _common(p, trials=False)
    p.add_argument("--hidden", default=None, help="hidden string (default: drawn from --family)")
    p.add_argument("--transcript", default=None, metavar="PATH", help="write the query log as JSON lines")

    p = sub.add_parser("exhaustive", help="run every string of length n")
    _common(p, trials=False, family=False)

    p = sub.add_parser("montecarlo", help="run seeded trials drawn from a corpus family")
    _common(p)

    p = sub.add_parser("verify", help="replay transcripts against candidate sets")
    _common(p)

    p = sub.add_parser("expect", help="exact expected query count of the average-case algorithm")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", default=None, metavar="PATH")
    return parser


def _config(args, mode: str) -> ExperimentConfig:
    return ExperimentConfig(
        algo=args.algo,
        mode=mode,
        n=args.n,
        trials=getattr(args, "trials", None),
        family=getattr(args, "family", "random"),
        seed=args.seed,
        c1=args.c1,
        c2=args.c2,
        delta=args.delta,
        q=args.q,
        r0=args.r0,
        whitebox=args.whitebox,
        workers=args.workers,
        bound=args.bound,
        max_exceed=args.max_exceed,
        hidden=getattr(args, "hidden", None),
    )


def _run_single(args) -> int:
    cfg = _config(args, "single")
    cfg.validate()
    hidden = hidden_for(cfg, 0)
    n = len(hidden)
    seed = trial_seed(cfg.seed, 0)
    o = Oracle(hidden, transcript=bool(args.transcript), whitebox=cfg.whitebox)
    if cfg.algo == "randomized":
        out = double_seed(o, n, cfg.params() if n >= 2 else None, rng_seed=seed)
        payload = out.to_json()
    else:
        if cfg.algo == "basic":
            d = longest_zero_run(hidden)
            result = basic(o, "0" * d, "0" * (d + 1), n)
        else:
            result = reconstruct_average(o, n)
        payload = {
            "result": result,
            "branch": "Basic" if cfg.algo == "basic" else "Average",
            "queries_total": o.total_queries,
            "queries_by_phase": dict(o.phase_counts),
            "params": None,
            "rng_seed": seed,
        }
    payload["correct"] = payload["result"] == hidden
    if args.transcript:
        o.write_transcript(args.transcript)
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    return 0 if payload["correct"] else 3


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run_single(args)
        if args.command == "expect":
            cfg = ExperimentConfig(algo="average", mode="expect", n=args.n)
            report = run_experiment(cfg, json_path=args.json)
            sys.stdout.write(report.json_text())
            return 0
        report = run_experiment(_config(args, args.command), csv_path=args.csv, json_path=args.json)
    except ValueError as exc:
        print(f"strrecon: error: {exc}", file=sys.stderr)
        return 1
    s = report.summary
    q = s["queries"]
    print(f"{s['algo']} {s['mode']} n={s['n']} trials={s['trials']} correct={s['correct']} "
          f"mean={q['mean']:.3f} max={q['max']} status={s['status']}")
    for name, check in s["checks"].items():
        print(f"  {name}: {'ok' if check['ok'] else 'VIOLATED'} {json.dumps(check, sort_keys=True)}")
    if s["first_failure"]:
        print(f"  first failure: {json.dumps(s['first_failure'])[:2000]}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
