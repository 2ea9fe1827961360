"""Average-case reconstruction and its exact accounting.

The algorithm locates the longest run of 0s by linear stepping from
``0^floor(log2 n)`` and then runs :func:`~strrecon.basic.basic` with the pair
``(0^d, 0^(d+1))``.  Because :func:`basic` costs exactly ``n + 2`` queries for
that pair, the mean cost over all ``2^n`` strings reduces to ``n + 2`` plus the
mean seed-search cost, which depends only on the longest-run length ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .basic import basic
from .oracle import Oracle


def floor_log2(n: int) -> int:
    if n < 1:
        raise ValueError("log2 of a non-positive count")
    return n.bit_length() - 1


def find_max_zero_run(o: Oracle, n: int) -> tuple[int, int]:
    """Return ``(d, cost)``: ``0^d`` occurs, ``0^(d+1)`` does not."""
    if n < 2:
        raise ValueError("n must be at least 2")
    start = o.total_queries
    k = floor_log2(n)
    if o.query("0" * k):
        k += 1
        while o.query("0" * k):
            k += 1
        d = k - 1
    else:
        k -= 1
        while k >= 1 and not o.query("0" * k):
            k -= 1
        d = k
    return d, o.total_queries - start


def reconstruct_average(o: Oracle, n: int) -> str:
    if n == 1:
        with o.phase_scope("seed"):
            return "1" if o.query("1") else "0"
    with o.phase_scope("seed"):
        d, _ = find_max_zero_run(o, n)
    with o.phase_scope("finish"):
        return basic(o, "0" * d, "0" * (d + 1), n)


def _runs_at_most(n: int, i: int) -> int:
    """Number of length-n strings whose every 0-run has length <= i."""
    if i < 0:
        return 0 if n > 0 else 1
    # by[r] = strings so far whose trailing 0-run has length r
    by = [1] + [0] * i
    for _ in range(n):
        total = sum(by)
        by = [total] + by[:-1]
    return sum(by)


def count_max_run_exact(n: int, i: int) -> int:
    """How many length-n strings have longest 0-run exactly ``i``."""
    if not 0 <= i <= n:
        raise ValueError(f"run length {i} out of range 0..{n}")
    return _runs_at_most(n, i) - _runs_at_most(n, i - 1)


def max_run_counts(n: int) -> list[int]:
    return [count_max_run_exact(n, i) for i in range(n + 1)]


def tail_bounds(n: int, ell: int) -> tuple[float, float]:
    """The union-bound tail ``alpha`` and the run-avoidance estimate ``beta``.

    alpha(l) = (n - l + 1) 2^(n-l) bounds how many strings contain 0^l;
    beta(l) = (1 - 2^-(l+1))^(n-l+1) 2^n is the estimate for strings avoiding 0^(l+1).
    """
    if not 1 <= ell <= n:
        raise ValueError(f"ell={ell} out of range 1..{n}")
    alpha = float((n - ell + 1) * 2 ** (n - ell))
    beta = (1.0 - 2.0 ** -(ell + 1)) ** (n - ell + 1) * 2.0 ** n
    return alpha, beta


def seed_cost(n: int, d: int) -> int:
    """Queries :func:`find_max_zero_run` spends when the longest 0-run is ``d``."""
    o = Oracle("0" * d + "1" * (n - d))
    return find_max_zero_run(o, n)[1]


def closed_form_seed_cost(n: int, d: int) -> int:
    """The closed-form per-run charge used in the analytic sum (2 + distance from log n)."""
    k = floor_log2(n)
    return 2 + (d - k if d >= k else k - 1 - d)


@dataclass
class AverageStats:
    n: int
    f: list[int]
    exact_mean: Fraction
    seed_mean: Fraction
    alpha: list[float] = field(default_factory=list)
    beta: list[float] = field(default_factory=list)
    per_d: list[dict] = field(default_factory=list)


def expected_queries(n: int, mode: str = "analytic") -> Fraction:
    """Exact mean query count of :func:`reconstruct_average` over all 2^n strings.

    ``analytic`` weights the measured per-run seed cost by ``f(d)`` and charges
    the ``n + 2`` Basic cost per string; ``exhaustive`` runs every string.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if mode == "analytic":
        f = max_run_counts(n)
        total = sum(f[d] * (seed_cost(n, d) + n + 2) for d in range(n + 1))
        return Fraction(total, 2 ** n)
    if mode == "exhaustive":
        from .bitstr import all_strings

        total = 0
        for h in all_strings(n):
            o = Oracle(h)
            reconstruct_average(o, n)
            total += o.total_queries
        return Fraction(total, 2 ** n)
    raise ValueError(f"unknown mode {mode!r}")


def average_stats(n: int) -> AverageStats:
    f = max_run_counts(n)
    seed_total = sum(f[d] * seed_cost(n, d) for d in range(n + 1))
    per_d = [
        {
            "d": d,
            "f": f[d],
            "seed_cost": seed_cost(n, d),
            "closed_form_seed_cost": closed_form_seed_cost(n, d),
            "basic_cost": n + 2,
        }
        for d in range(n + 1)
    ]
    alpha, beta = [], []
    for ell in range(1, n + 1):
        a, b = tail_bounds(n, ell)
        alpha.append(a)
        beta.append(b)
    return AverageStats(
        n=n,
        f=f,
        exact_mean=expected_queries(n),
        seed_mean=Fraction(seed_total, 2 ** n),
        alpha=alpha,
        beta=beta,
        per_d=per_d,
    )


def beta_range(n: int) -> range:
    """Values of ell for which the beta estimate is claimed (ell <= log n - 1)."""
    return range(1, floor_log2(n))


def log2_ceil(x: float) -> int:
    return math.ceil(math.log2(x))
