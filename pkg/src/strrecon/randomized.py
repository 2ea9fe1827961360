"""Randomized reconstruction: the double-seed pipeline.

Entry point is :func:`double_seed`.  It first tries the cheap routes in
:func:`try_easycase`; failing those it grows the first seed ``0^d`` to the
right, sampling positions to discover either single-child contexts (stored in a
label table and later used to extend for free) or a double-child context, which
yields a second seed and hands over to :func:`second_seed`.  If the growing
string runs into the right end of the hidden string, :func:`exception` finishes
the job leftwards.

Correctness does not depend on the random choices.  Two checks beyond the
textbook control flow keep it unconditional:

* a string built by "No, so the other symbol" inferences is confirmed with one
  query before it is handed to :func:`second_seed` or to the final Basic call;
* the right-end sentinel is re-checked when the main loop exits, because a
  padded string can reach the length target in the same step it is padded.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .average import floor_log2, reconstruct_average
from .basic import basic, extend_left, extend_right, fill, find_left_end, find_right_end
from .bitstr import SubstringIndex, flip, sibling
from .oracle import Oracle

PHASES = ("seed", "easycase", "mainloop", "sampling", "second_seed", "exception", "finish")
BRANCHES = ("EasyCase", "Exception", "SecondSeed", "BasicFinish")
GEOMETRIES = ("left-hit", "disjoint-right", "overlapping", "left-to-end", "fallthrough")

# C1 and C2 below these values void the failure-probability guarantee
GUARANTEE_C1 = 20
GUARANTEE_C2 = 40


@dataclass
class Params:
    n: int
    C1: int
    C2: int
    delta: float
    q: int
    ell: Optional[int] = None
    r0: Optional[float] = None
    d: Optional[int] = None
    d1: Optional[int] = None
    rng_seed: Optional[int] = None
    r0_override: Optional[float] = None
    overridden: tuple = ()

    @property
    def guarantee_void(self) -> bool:
        return bool(self.overridden) or self.C1 < GUARANTEE_C1 or self.C2 < GUARANTEE_C2

    def with_seed(self, d: int, d1: int) -> "Params":
        """Fill in the quantities that depend on the discovered run ``0^d``."""
        self.d, self.d1 = d, d1
        self.ell = d + 2 * d1
        if self.r0_override is not None:
            self.r0 = self.r0_override
        else:
            self.r0 = min(1.0, d1 / (2 * self.q))
        return self

    def to_dict(self) -> dict:
        out = asdict(self)
        out["overridden"] = list(self.overridden)
        out["guarantee_void"] = self.guarantee_void
        return out


def derive_params(n: int, delta: float = 1.0, *, c1: int | None = None, c2: int | None = None,
                  q: int | None = None, r0: float | None = None,
                  rng_seed: int | None = None) -> Params:
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if n < 2:
        raise ValueError("n must be at least 2")
    default_c2 = math.ceil(2 ** 13 * math.log(3 / delta))
    overridden = []
    if c2 is not None:
        overridden.append("C2")
    C2 = default_c2 if c2 is None else c2
    if c1 is not None:
        overridden.append("C1")
        if c1 < 1:
            raise ValueError("C1 must be at least 1")
    C1 = math.ceil(C2 / 2) if c1 is None else c1
    if q is not None:
        overridden.append("q")
        if q < 1:
            raise ValueError("q must be at least 1")
    if r0 is not None:
        overridden.append("r0")
        if not 0 < r0 <= 1:
            raise ValueError("r0 must be in (0, 1]")
    return Params(
        n=n,
        C1=C1,
        C2=C2,
        delta=delta,
        q=math.ceil(n / 100) if q is None else q,
        rng_seed=rng_seed,
        r0_override=r0,
        overridden=tuple(overridden),
    )


@dataclass
class Outcome:
    result: str
    branch: str
    queries: int
    phases: dict
    params: Params
    rng_seed: Optional[int]
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "result": self.result,
            "branch": self.branch,
            "queries_total": self.queries,
            "queries_by_phase": {p: self.phases.get(p, 0) for p in PHASES},
            "params": self.params.to_dict(),
            "rng_seed": self.rng_seed,
        }


@dataclass
class EasyResult:
    done: bool
    route: str
    result: Optional[str] = None
    d: Optional[int] = None
    d1: Optional[int] = None
    draws: int = 0


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_bits(rng: np.random.Generator, length: int) -> str:
    return "".join("1" if b else "0" for b in rng.integers(0, 2, size=length))


def pad_to_sentinel(s: str, d: int) -> str:
    """Append 0s until ``s`` ends with ``0^(d+1)``."""
    trailing = len(s) - len(s.rstrip("0"))
    return s + "0" * max(0, d + 1 - trailing)


def bs_run_search(o: Oracle, lo: int, hi: int) -> tuple[int, int]:
    """Bisect for the longest 0-run given ``0^lo`` occurs and ``0^hi`` does not."""
    if lo >= hi:
        raise ValueError(f"empty interval [{lo}, {hi})")
    start = o.total_queries
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if o.query("0" * mid):
            lo = mid
        else:
            hi = mid
    return lo, o.total_queries - start


def try_easycase(o: Oracle, n: int, p: Params, rng: np.random.Generator) -> EasyResult:
    log_n = floor_log2(n)
    g = log_n - p.C1
    if g < 1:
        raise ValueError(f"log2(n) - C1 = {g} < 1; use the small-n fallback")
    start = o.total_queries
    with o.phase_scope("easycase"):
        if o.query("0" * g):
            width = log_n + p.C1
            draws = 0
            while True:
                x = random_bits(rng, width)
                draws += 1
                if not o.query(x):
                    break
            with o.phase_scope("finish"):
                result = basic(o, "0" * g, x, n)
            return EasyResult(True, "gate", result=result, draws=draws)

        half = log_n // 2
        if half < g:
            half_yes = o.query("0" * half)
            known_no = half
        else:
            # 0^half contains 0^g, already answered No
            half_yes = False
            known_no = g
        if half_yes:
            i = 0
            while True:
                length = g - 2 ** i
                if length <= half or o.query("0" * length):
                    break
                i += 1
            lo = max(length, half)
            hi = g if i == 0 else g - 2 ** (i - 1)
        else:
            i = 0
            while True:
                length = 2 ** i
                if length >= known_no:
                    hi = known_no
                    break
                if not o.query("0" * length):
                    hi = length
                    break
                i += 1
            lo = 2 ** (i - 1) if i > 0 else 0
            if hi == 1:
                with o.phase_scope("finish"):
                    result = basic(o, "", "0", n)
                return EasyResult(True, "all-ones", result=result, d=0)
        d, _ = bs_run_search(o, lo, hi)
        d1 = o.total_queries - start
        if d1 <= p.C2:
            with o.phase_scope("finish"):
                result = basic(o, "0" * d, "0" * (d + 1), n)
            return EasyResult(True, "cheap-seed", result=result, d=d, d1=d1)
        ones = "1" * (d + 2 * d1)
        if o.query(ones):
            with o.phase_scope("finish"):
                result = basic(o, ones, "0" * (d + 1), n)
            return EasyResult(True, "ones-run", result=result, d=d, d1=d1)
    return EasyResult(False, "seed", d=d, d1=d1)


def two_extension(o: Oracle, I: str, t: str, d: int, rng: np.random.Generator) -> tuple[str, bool]:
    """Extend by the labelled symbol ``t`` plus one more; pad with 0s at the right end.

    Returns the new string and whether it is confirmed to occur.
    """
    s = "1" if rng.integers(0, 2) else "0"
    if o.query(I + t + s):
        return I + t + s, True
    other = flip(s)
    if o.query(I + t + other):
        return I + t + other, True
    if o.query(I + t):
        return pad_to_sentinel(I + t, d), False
    return pad_to_sentinel(I, d), False


def two_extension_left(I: str, t: str) -> str:
    return t + I


def _note_geometry(detail: Optional[dict], geometry: str) -> None:
    if detail is not None:
        detail.setdefault("geometries", []).append(geometry)


def second_seed(o: Oracle, I: str, S: str, d: int, n: int, *, seed_at: int = 0,
                i_is_suffix: bool = False, detail: Optional[dict] = None) -> str:
    """Finish from the extension ``I`` and a second seed ``S`` that is not inside ``I``.

    ``I`` holds the first seed ``0^d`` at offset ``seed_at`` followed by ``1 Z``.
    With ``i_is_suffix`` the caller already knows ``I`` is a suffix of the
    hidden string, so the leftward half of the procedure is unnecessary.
    """
    if d < 1:
        raise ValueError("second_seed needs a non-empty first seed")
    o.whitebox_assert_substring(S)
    zeros = "0" * d
    sentinel = zeros + "0"
    k = len(S)
    after_seed = I[seed_at + d:]
    Z = after_seed[1:] if after_seed else ""
    with o.phase_scope("second_seed"):
        while True:
            S = extend_right(o, S)
            o.whitebox_assert_overshoot(S, "right")
            if not S.endswith(zeros):
                continue
            if Z:
                if o.query(S + "1" + Z[0]):
                    if o.query(S + "1" + Z):
                        _note_geometry(detail, "left-hit")
                        return basic(o, S + "1" + Z, sentinel, n)
                    S = S + "1" + Z[0]
                    continue
                if o.query(S + "1" + flip(Z[0])):
                    S = S + "1" + flip(Z[0])
                    continue
            if o.query(S + "1"):
                S += "1"
                if Z:
                    break
                continue
            S = find_right_end(o, S, zeros)
            break
        o.whitebox_assert_suffix(S)

        if i_is_suffix:
            _note_geometry(detail, "left-to-end")
            return fill(o, "", max(I, S, key=len), n)

        o.whitebox_assert_substring(I)
        while len(I) + len(S) <= n:
            I = extend_left(o, I)
            o.whitebox_assert_overshoot(I, "left")
            if I.startswith(sentinel):
                P = find_left_end(o, I, d)
                o.whitebox_assert_prefix(P)
                _note_geometry(detail, "disjoint-right")
                return fill(o, P, S, n)
        if not o.query(I):
            P = find_left_end(o, I, d)
            o.whitebox_assert_prefix(P)
            _note_geometry(detail, "disjoint-right")
            return fill(o, P, S, n)
        top = min(len(I), len(S))
        for j in range(min(k, top), 0, -1):
            if I.endswith(S[:j]) and o.query(I + S[j:]):
                _note_geometry(detail, "overlapping")
                return fill(o, "", I + S[j:], n)
        # overlaps longer than the seed's original length are outside the literal scan
        for j in range(top, k, -1):
            if I.endswith(S[:j]) and o.query(I + S[j:]):
                if detail is not None:
                    detail["overlap_beyond_k"] = detail.get("overlap_beyond_k", 0) + 1
                _note_geometry(detail, "overlapping")
                return fill(o, "", I + S[j:], n)
        _note_geometry(detail, "fallthrough")
        return fill(o, "", S, n)


def _scan_labels(labels: dict, lengths: list[int], I: str, from_left: bool) -> Optional[str]:
    for m in lengths:
        if m > len(I):
            break
        t = labels.get(I[:m] if from_left else I[len(I) - m:])
        if t is not None:
            return t
    return None


def exception(o: Oracle, I: str, p: Params, rng: np.random.Generator,
              detail: Optional[dict] = None) -> str:
    """Recover after the main loop ran past the right end: grow leftwards from the true suffix."""
    d, n, ell, r0 = p.d, p.n, p.ell, p.r0
    if detail is None:
        detail = {}
    with o.phase_scope("exception"):
        I = find_right_end(o, I, "0" * (d + 1))
        o.whitebox_assert_suffix(I)
        k = len(I)
        rev = SubstringIndex(I[::-1])
        labels: dict[str, str] = {}
        lengths: list[int] = []
        limit = min(p.q + k, n)
        while len(I) < limit:
            r = rng.random()
            if len(I) >= ell:
                detail["eligible"] = detail.get("eligible", 0) + 1
                if r < r0:
                    detail["samples"] = detail.get("samples", 0) + 1
                    m = ell
                    while (I[m - 1:0:-1] + flip(I[0])) in rev:
                        m += 1
                    cand = flip(I[0]) + I[1:m]
                    with o.phase_scope("sampling"):
                        hit = o.query(cand)
                    if hit:
                        return second_seed(o, I, cand, d, n, seed_at=len(I) - k,
                                           i_is_suffix=True, detail=detail)
                    key = I[1:m]
                    o.whitebox_assert_label(key, I[0], "left")
                    if key not in labels:
                        labels[key] = I[0]
                        if len(key) not in lengths:
                            lengths.append(len(key))
                            lengths.sort()
            if labels:
                t = _scan_labels(labels, lengths, I, from_left=True)
                if t is not None:
                    I = two_extension_left(I, t)
                    rev.append(t)
                    detail["free"] = detail.get("free", 0) + 1
                    o.whitebox_assert_suffix(I)
            if len(I) < n:
                I = extend_left(o, I)
                rev.append(I[0])
                o.whitebox_assert_suffix(I)
        return fill(o, "", I, n)


def run_main_loop(o: Oracle, p: Params, rng: np.random.Generator,
                  detail: Optional[dict] = None) -> tuple[str, str]:
    """Grow the first seed to length ``q`` and finish; returns ``(result, branch)``."""
    d, n, ell, r0, q = p.d, p.n, p.ell, p.r0, p.q
    if d is None or d < 1:
        raise ValueError("main loop needs a non-empty first seed")
    if detail is None:
        detail = {}
    sentinel = "0" * (d + 1)
    I = "0" * d
    confirmed = True
    index = SubstringIndex(I)
    labels: dict[str, str] = {}
    lengths: list[int] = []

    def to_exception(s: str) -> tuple[str, str]:
        o.whitebox_assert_overshoot(s, "right")
        return exception(o, s, p, rng, detail), "Exception"

    with o.phase_scope("mainloop"):
        while len(I) < q:
            if I.endswith(sentinel):
                return to_exception(I)
            r = rng.random()
            if len(I) >= ell:
                detail["eligible"] = detail.get("eligible", 0) + 1
                if r < r0:
                    detail["samples"] = detail.get("samples", 0) + 1
                    m = ell
                    while sibling(I[len(I) - m:]) in index:
                        m += 1
                    cand = sibling(I[len(I) - m:])
                    with o.phase_scope("sampling"):
                        hit = o.query(cand)
                    if hit:
                        if not confirmed and not o.query(I):
                            I = pad_to_sentinel(I, d)
                            index.extend(I[len(index):])
                            continue
                        return second_seed(o, I, cand, d, n, detail=detail), "SecondSeed"
                    key = cand[:-1]
                    o.whitebox_assert_label(key, I[-1], "right")
                    if key not in labels:
                        labels[key] = I[-1]
                        if len(key) not in lengths:
                            lengths.append(len(key))
                            lengths.sort()
            t = _scan_labels(labels, lengths, I, from_left=False) if labels else None
            if t is not None:
                I, confirmed = two_extension(o, I, t, d, rng)
            else:
                I = extend_right(o, I)
                confirmed = I[-1] == "1"
            index.extend(I[len(index):])
            o.whitebox_assert_overshoot(I, "right")
        if I.endswith(sentinel):
            return to_exception(I)
        if not confirmed and not o.query(I):
            return to_exception(pad_to_sentinel(I, d))
    with o.phase_scope("finish"):
        return basic(o, I, sentinel, n), "BasicFinish"


def double_seed(o: Oracle, n: int, params: Optional[Params] = None,
                rng_seed: Optional[int] = None) -> Outcome:
    """Reconstruct the hidden string; the result is always exact."""
    if params is None:
        params = derive_params(n, rng_seed=rng_seed) if n >= 2 else None
    else:
        params = replace(params)
    rng = make_rng(rng_seed)
    start = o.total_queries
    detail: dict = {}
    if n < 2 or floor_log2(n) - params.C1 < 1:
        result = reconstruct_average(o, n)
        detail["fallback"] = True
        branch = "BasicFinish"
        if params is None:
            params = Params(n=n, C1=0, C2=0, delta=1.0, q=1, rng_seed=rng_seed)
    else:
        easy = try_easycase(o, n, params, rng)
        detail["easy_route"] = easy.route
        detail["draws"] = easy.draws
        if easy.done:
            result, branch = easy.result, "EasyCase"
            if easy.d is not None:
                params.d, params.d1 = easy.d, easy.d1
        else:
            params.with_seed(easy.d, easy.d1)
            result, branch = run_main_loop(o, params, rng, detail)
    params.rng_seed = rng_seed
    return Outcome(
        result=result,
        branch=branch,
        queries=o.total_queries - start,
        phases=dict(o.phase_counts),
        params=params,
        rng_seed=rng_seed,
        detail=detail,
    )
