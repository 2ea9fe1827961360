"""Experiment orchestration: run many reconstructions, aggregate, and emit CSV/JSON.

Each trial is a pure function of ``(config, trial index)``: the hidden string
comes from the trial's corpus stream and the algorithm's RNG from the trial
seed, so results do not depend on how trials are split across worker processes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .average import average_stats, reconstruct_average
from .basic import basic
from .bitstr import BitString, longest_zero_run
from .corpus import corpus_rng, gen_one, parse_family, trial_seed
from .oracle import Oracle, WhiteboxError
from .randomized import derive_params, double_seed
from .verify import MATERIALIZE_MAX_N, check_run

ALGOS = ("basic", "average", "randomized")
MODES = ("single", "exhaustive", "montecarlo", "expect", "verify")
CSV_COLUMNS = ("n", "trial", "family", "algo", "branch", "queries", "correct", "seed")
SCHEMA_VERSION = 1
EXHAUSTIVE_MAX_N = 24

EXIT_OK = 0
EXIT_BOUND = 2
EXIT_INCORRECT = 3


@dataclass
class ExperimentConfig:
    algo: str = "randomized"
    mode: str = "montecarlo"
    n: int = 64
    trials: Optional[int] = None
    family: str = "random"
    seed: int = 0
    c1: Optional[int] = None
    c2: Optional[int] = None
    delta: float = 1.0
    q: Optional[int] = None
    r0: Optional[float] = None
    whitebox: bool = False
    workers: Optional[int] = None
    bound: Optional[float] = None
    max_exceed: float = 0.01
    hidden: Optional[str] = None

    def validate(self) -> None:
        if self.algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.mode == "exhaustive" and self.n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive mode is capped at n = {EXHAUSTIVE_MAX_N}")
        if self.mode == "verify" and self.trials is None and self.n > MATERIALIZE_MAX_N:
            raise ValueError(f"exhaustive verification is capped at n = {MATERIALIZE_MAX_N}")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be positive")
        if self.hidden is not None:
            BitString(self.hidden)
            if len(self.hidden) != self.n:
                raise ValueError(f"hidden string has length {len(self.hidden)}, expected {self.n}")
        if self.algo != "randomized" and any(
                v is not None for v in (self.c1, self.c2, self.q, self.r0)):
            raise ValueError("--c1/--c2/--q/--r0 only apply to the randomized algorithm")
        if self.mode in ("montecarlo", "single", "verify"):
            parse_family(self.family)
        if not 0 <= self.max_exceed <= 1:
            raise ValueError("max_exceed must be a fraction")

    @property
    def exhaustive(self) -> bool:
        return self.mode == "exhaustive" or (self.mode == "verify" and self.trials is None)

    @property
    def trial_count(self) -> int:
        if self.mode == "single":
            return 1
        if self.exhaustive:
            return 1 << self.n
        return self.trials if self.trials is not None else 1000

    def params(self):
        return derive_params(self.n, self.delta, c1=self.c1, c2=self.c2, q=self.q, r0=self.r0)


@dataclass
class RunReport:
    config: ExperimentConfig
    rows: list[dict]
    summary: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r["n"], r["trial"], r["family"], r["algo"], r["branch"],
                        r["queries"], int(r["correct"]), r["seed"]])
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps(self.summary, indent=2, sort_keys=True) + "\n"


def hidden_for(cfg: ExperimentConfig, trial: int) -> str:
    if cfg.hidden is not None:
        return cfg.hidden
    if cfg.exhaustive:
        return format(trial, f"0{cfg.n}b")
    return gen_one(cfg.family, cfg.n, corpus_rng(cfg.seed, trial), trial)


def _digest(hidden: str) -> str:
    return hashlib.sha1(hidden.encode()).hexdigest()[:12]


def run_trial(cfg: ExperimentConfig, trial: int, params=None) -> dict:
    hidden = hidden_for(cfg, trial)
    n = len(hidden)
    seed = trial_seed(cfg.seed, trial)
    check = cfg.mode == "verify"
    o = Oracle(hidden, whitebox=cfg.whitebox, transcript=check)
    row = {
        "n": n,
        "trial": trial,
        "family": "exhaustive" if cfg.exhaustive else cfg.family,
        "algo": cfg.algo,
        "seed": seed,
        "digest": _digest(hidden),
    }
    try:
        if cfg.algo == "basic":
            d = longest_zero_run(hidden)
            result = basic(o, "0" * d, "0" * (d + 1), n)
            row["branch"] = "Basic"
            row["d"] = d
        elif cfg.algo == "average":
            result = reconstruct_average(o, n)
            row["branch"] = "Average"
            row["seed_queries"] = o.phase_counts.get("seed", 0)
        else:
            if params is None and n >= 2:
                params = cfg.params()
            out = double_seed(o, n, params, rng_seed=seed)
            result = out.result
            row["branch"] = out.branch
            det = out.detail
            row["geometries"] = det.get("geometries", [])
            row["samples"] = det.get("samples", 0)
            row["eligible"] = det.get("eligible", 0)
            row["r0"] = out.params.r0
            row["route"] = det.get("easy_route", "fallback" if det.get("fallback") else None)
            row["overlap_beyond_k"] = det.get("overlap_beyond_k", 0)
    except WhiteboxError as exc:
        row.update(branch="Error", queries=o.total_queries, correct=False, error=str(exc)[:4000])
        return row
    row["queries"] = o.total_queries
    row["correct"] = result == hidden
    if check:
        verdict = check_run(o.transcript, result, hidden)
        row["verdict"] = verdict.to_dict()
        row["correct"] = row["correct"] and verdict.ok
    return row


def _run_chunk(args) -> list[dict]:
    cfg, start, stop = args
    params = cfg.params() if cfg.algo == "randomized" and cfg.n >= 2 else None
    return [run_trial(cfg, t, params) for t in range(start, stop)]


def worker_count(cfg: ExperimentConfig) -> int:
    count = cfg.workers if cfg.workers is not None else (os.cpu_count() or 1)
    cap = os.environ.get("STRRECON_THREADS")
    if cap:
        count = min(count, int(cap))
    return max(1, count)


def run_trials(cfg: ExperimentConfig) -> list[dict]:
    total = cfg.trial_count
    workers = min(worker_count(cfg), total)
    if workers <= 1:
        return _run_chunk((cfg, 0, total))
    size = max(1, math.ceil(total / (workers * 8)))
    chunks = [(cfg, s, min(s + size, total)) for s in range(0, total, size)]
    rows: list[dict] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_chunk, chunks):
            rows.extend(part)
    return rows


def _quantiles(values: np.ndarray) -> dict:
    if not len(values):
        return {}
    return {f"p{p}": int(np.percentile(values, p, method="higher")) for p in (50, 90, 99)}


def aggregate(cfg: ExperimentConfig, rows: list[dict]) -> dict:
    """Summary statistics; a pure function of the rows so it can be recomputed."""
    n = cfg.n
    qs = np.array([r["queries"] for r in rows], dtype=np.int64)
    total = int(qs.sum())
    branches: dict[str, int] = {}
    for r in rows:
        branches[r["branch"]] = branches.get(r["branch"], 0) + 1
    failures = [r for r in rows if not r["correct"]]
    summary = {
        "schema": SCHEMA_VERSION,
        "algo": cfg.algo,
        "mode": cfg.mode,
        "n": n,
        "family": "exhaustive" if cfg.exhaustive else cfg.family,
        "seed": cfg.seed,
        "trials": len(rows),
        "correct": len(rows) - len(failures),
        "queries": {
            "total": total,
            "mean": total / len(rows),
            "mean_exact": str(Fraction(total, len(rows))),
            "min": int(qs.min()),
            "max": int(qs.max()),
            **_quantiles(qs),
        },
        "branches": dict(sorted(branches.items())),
        "first_failure": None,
        "checks": {},
    }
    if failures:
        f = failures[0]
        summary["first_failure"] = {k: f[k] for k in ("trial", "digest", "branch", "queries")}
        if "error" in f:
            summary["first_failure"]["error"] = f["error"]
        if "verdict" in f:
            summary["first_failure"]["verdict"] = f["verdict"]
    checks = summary["checks"]
    if cfg.algo == "basic":
        limit = n + 2
        over = sum(1 for r in rows if r["queries"] > limit)
        checks["per_trial_bound"] = {"limit": limit, "violations": over, "ok": over == 0}
    elif cfg.algo == "average":
        seed_q = sum(r["seed_queries"] for r in rows)
        summary["seed_mean"] = seed_q / len(rows)
        if cfg.exhaustive and n >= 2:
            mean = Fraction(total, len(rows))
            checks["mean_bound"] = {"limit": n + 6, "mean": float(mean), "ok": mean <= n + 6}
            checks["seed_mean_bound"] = {"limit": 5, "mean": seed_q / len(rows),
                                         "ok": Fraction(seed_q, len(rows)) <= 5}
    else:
        geos: dict[str, int] = {}
        routes: dict[str, int] = {}
        for r in rows:
            for g in r.get("geometries", []):
                geos[g] = geos.get(g, 0) + 1
            if r.get("route"):
                routes[r["route"]] = routes.get(r["route"], 0) + 1
        summary["geometries"] = dict(sorted(geos.items()))
        summary["easy_routes"] = dict(sorted(routes.items()))
        summary["overlap_beyond_k"] = sum(r.get("overlap_beyond_k", 0) for r in rows)
        samples = sum(r.get("samples", 0) for r in rows)
        expected = sum((r["r0"] or 0) * r.get("eligible", 0) for r in rows)
        var = sum((r["r0"] or 0) * (1 - (r["r0"] or 0)) * r.get("eligible", 0) for r in rows)
        sigma = math.sqrt(var)
        z = (samples - expected) / sigma if sigma > 0 else 0.0
        checks["sampling"] = {"samples": samples, "expected": expected, "sigma": sigma,
                              "z": z, "ok": abs(z) <= 5 or (sigma == 0 and samples == expected)}
        if cfg.bound is not None:
            limit = n + cfg.bound
            over = sum(1 for r in rows if r["queries"] > limit)
            frac = over / len(rows)
            checks["exceedance"] = {"limit": limit, "exceed": over, "fraction": frac,
                                    "max_fraction": cfg.max_exceed, "ok": frac <= cfg.max_exceed}
    if cfg.mode == "verify":
        forced = sum(1 for r in rows if r.get("verdict", {}).get("forced"))
        summary["verify"] = {"checked": len(rows), "forced": forced,
                             "failed": sum(1 for r in rows if not r.get("verdict", {}).get("ok"))}
    summary["status"] = "FAILED" if failures else (
        "BOUND_VIOLATION" if any(not c["ok"] for c in checks.values()) else "PASS")
    return summary


def exit_code_for(summary: dict) -> int:
    return {"PASS": EXIT_OK, "BOUND_VIOLATION": EXIT_BOUND}.get(summary["status"], EXIT_INCORRECT)


def expect_report(n: int) -> dict:
    stats = average_stats(n)
    return {
        "schema": SCHEMA_VERSION,
        "n": n,
        "exact_mean": str(stats.exact_mean),
        "exact_mean_float": float(stats.exact_mean),
        "mean_bound": n + 6,
        "seed_mean": float(stats.seed_mean),
        "per_d": stats.per_d,
    }


def run_experiment(cfg: ExperimentConfig, csv_path=None, json_path=None) -> RunReport:
    cfg.validate()
    if cfg.mode == "expect":
        if cfg.n < 2:
            raise ValueError("expect needs n >= 2")
        report = RunReport(cfg, [], expect_report(cfg.n))
    else:
        rows = run_trials(cfg)
        summary = aggregate(cfg, rows)
        report = RunReport(cfg, rows, summary, exit_code_for(summary))
    if csv_path and report.rows:
        with open(csv_path, "w", newline="") as fh:
            fh.write(report.csv_text())
    if json_path:
        with open(json_path, "w") as fh:
            fh.write(report.json_text())
    return report

