"""Independent consistency checks on a recorded run.

A :class:`CandidateSet` starts as every string of length ``n`` and is narrowed
by each ``(query, answer)`` pair.  After a run the hidden string must survive,
the reported result must survive, and a singleton set means the answers alone
forced the result.  Strings are encoded as integers with the first symbol as
the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

MATERIALIZE_MAX_N = 20


# exhaustive sweeps repeat the same patterns constantly; large-n vectors are too big to keep
_CACHE_MAX_N = 14


def membership(n: int, pattern: str) -> np.ndarray:
    """Boolean vector over all 2^n strings: does string ``x`` contain ``pattern``."""
    if n <= _CACHE_MAX_N:
        return _membership_cached(n, pattern)
    return _membership(n, pattern)


@lru_cache(maxsize=1 << 15)
def _membership_cached(n: int, pattern: str) -> np.ndarray:
    return _membership(n, pattern)


def _membership(n: int, pattern: str) -> np.ndarray:
    size = 1 << n
    m = len(pattern)
    if m == 0:
        return np.ones(size, dtype=bool)
    if m > n:
        return np.zeros(size, dtype=bool)
    xs = np.arange(size, dtype=np.uint32)
    mask = np.uint32((1 << m) - 1)
    val = np.uint32(int(pattern, 2))
    out = np.zeros(size, dtype=bool)
    for shift in range(n - m + 1):
        out |= ((xs >> np.uint32(shift)) & mask) == val
    out.flags.writeable = False
    return out


class CandidateSet:
    """Strings of length ``n`` consistent with every answer seen so far."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.materialized = n <= MATERIALIZE_MAX_N
        self._mask = np.ones(1 << n, dtype=bool) if self.materialized else None
        self._constraints: list[tuple[str, bool]] = []

    def filter(self, query: str, answer: bool) -> "CandidateSet":
        if self.materialized:
            vec = membership(self.n, query)
            self._mask &= vec if answer else ~vec
        else:
            self._constraints.append((query, answer))
        return self

    def __contains__(self, s: str) -> bool:
        if len(s) != self.n:
            return False
        if self.materialized:
            return bool(self._mask[int(s, 2)])
        return all((q in s) == a for q, a in self._constraints)

    def __len__(self) -> int:
        if not self.materialized:
            raise TypeError(f"size of a lazy candidate set (n={self.n}) is not computed")
        return int(self._mask.sum())

    def members(self) -> list[str]:
        if not self.materialized:
            raise TypeError("lazy candidate sets cannot be listed")
        fmt = f"0{self.n}b"
        return [format(int(v), fmt) for v in np.flatnonzero(self._mask)]


@dataclass
class Verdict:
    ok: bool
    clause: Optional[str] = None
    index: Optional[int] = None
    message: str = ""
    final_size: Optional[int] = None
    info_bound: Optional[bool] = None
    forced: Optional[bool] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_run(transcript: Iterable, result: str, hidden: str) -> Verdict:
    """Replay a transcript against the hidden string and the candidate set.

    ``transcript`` holds records with ``index``, ``query`` and ``answer``
    attributes (or dicts with those keys).
    """
    n = len(hidden)
    cs = CandidateSet(n)
    count = 0
    for rec in transcript:
        if isinstance(rec, dict):
            idx, query, answer = rec["index"], rec["query"], rec["answer"]
        else:
            idx, query, answer = rec.index, rec.query, rec.answer
        count += 1
        if (query in hidden) != answer:
            return Verdict(False, "a", idx, f"answer to {query!r} disagrees with the hidden string")
        cs.filter(query, answer)
    if result != hidden:
        return Verdict(False, "b", None, f"result {result!r} differs from hidden string")
    if not cs.materialized:
        return Verdict(True)
    size = len(cs)
    if result not in cs:
        return Verdict(False, "c", None, "result is not consistent with the answers", final_size=size)
    info = size * (1 << count) >= (1 << n)
    if not info:
        return Verdict(False, "info", None,
                       f"{count} queries cannot narrow 2^{n} strings to {size}",
                       final_size=size, info_bound=False)
    return Verdict(True, final_size=size, info_bound=True, forced=size == 1)
