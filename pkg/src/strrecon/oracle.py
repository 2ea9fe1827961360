"""Substring oracle with exact query accounting.

The oracle is the only channel through which reconstruction code learns about
the hidden string.  Every call to :meth:`Oracle.query` is counted, attributed to
the current phase tag, and optionally recorded in a transcript.

White-box hooks (``whitebox_*``) read the hidden string directly.  They exist so
tests can catch an unsound inference at the exact step it is made; they never
count as queries and are no-ops unless the oracle was built with
``whitebox=True``.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from typing import Iterator

from .bitstr import BitString

DEFAULT_PHASE = "default"
# occurrence lists longer than this are not cached; short patterns are cheap to scan anyway
_MAX_CACHED_OCCURRENCES = 64


class WhiteboxError(AssertionError):
    """An algorithm committed something the hidden string contradicts."""


@dataclass(frozen=True)
class QueryRecord:
    index: int
    query: str
    answer: bool
    phase: str


class Oracle:
    def __init__(self, hidden: str, *, transcript: bool = False, whitebox: bool = False):
        hidden = BitString(hidden)
        if not hidden:
            raise ValueError("hidden string must be non-empty")
        self._hidden = str(hidden)
        self.n = len(hidden)
        self.total_queries = 0
        self.phase_counts: dict[str, int] = {}
        self.record_transcript = transcript
        self.transcript: list[QueryRecord] = []
        self.whitebox_enabled = whitebox
        self._phase = DEFAULT_PHASE
        # last Yes-answered query and every position it occurs at
        self._anchor: str | None = None
        self._anchor_pos: list[int] = []
        # after an overflow, skip enumeration until queries reach this length
        self._retry_len = 0
        self._retry_step = 1

    def __repr__(self) -> str:
        return f"<Oracle n={self.n} queries={self.total_queries}>"

    @property
    def phase(self) -> str:
        return self._phase

    def set_phase(self, tag: str) -> None:
        self._phase = tag

    @contextmanager
    def phase_scope(self, tag: str) -> Iterator[None]:
        """Attribute queries to ``tag`` inside the block, then restore the previous tag."""
        previous = self._phase
        self._phase = tag
        try:
            yield
        finally:
            self._phase = previous

    def query(self, s: str) -> bool:
        answer = self._answer(s)
        self.total_queries += 1
        counts = self.phase_counts
        counts[self._phase] = counts.get(self._phase, 0) + 1
        if self.record_transcript:
            self.transcript.append(QueryRecord(self.total_queries, s, answer, self._phase))
        return answer

    def _answer(self, s: str) -> bool:
        h = self._hidden
        if len(s) > self.n:
            return False
        anchor = self._anchor
        # Queries usually extend the previous Yes by a few symbols on one side;
        # filtering that string's known occurrences is exact and avoids a full scan.
        if anchor is not None and len(s) >= len(anchor):
            la = len(anchor)
            if s.startswith(anchor):
                tail = s[la:]
                if len(self._anchor_pos) == 1:
                    if h.startswith(tail, self._anchor_pos[0] + la):
                        self._anchor = s
                        return True
                    return False
                pos = [p for p in self._anchor_pos if h.startswith(tail, p + la)]
                if pos:
                    self._anchor, self._anchor_pos = s, pos
                    return True
                return False
            if s.endswith(anchor):
                lw = len(s) - la
                head = s[:lw]
                if len(self._anchor_pos) == 1:
                    p0 = self._anchor_pos[0]
                    if p0 >= lw and h.startswith(head, p0 - lw):
                        self._anchor, self._anchor_pos = s, [p0 - lw]
                        return True
                    return False
                pos = [p - lw for p in self._anchor_pos if p >= lw and h.startswith(head, p - lw)]
                if pos:
                    self._anchor, self._anchor_pos = s, pos
                    return True
                return False
        i = h.find(s)
        if i < 0:
            return False
        if len(s) < self._retry_len:
            return True
        pos = []
        while i >= 0:
            pos.append(i)
            if len(pos) > _MAX_CACHED_OCCURRENCES:
                # frequent pattern (periodic text): back off geometrically
                self._anchor = None
                self._retry_len = len(s) + self._retry_step
                self._retry_step *= 2
                return True
            i = h.find(s, i + 1)
        self._anchor, self._anchor_pos = s, pos
        self._retry_step = 1
        return True

    def transcript_jsonl(self) -> str:
        return "".join(json.dumps(asdict(r)) + "\n" for r in self.transcript)

    def write_transcript(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.transcript_jsonl())

    # ------------------------------------------------------------------
    # white-box hooks: test instrumentation only

    def _fail(self, message: str) -> None:
        lines = [message, f"hidden={self._hidden}"]
        lines += [f"  #{r.index} [{r.phase}] Q({r.query}) = {int(r.answer)}" for r in self.transcript]
        raise WhiteboxError("\n".join(lines))

    def whitebox_assert_substring(self, s: str) -> None:
        if self.whitebox_enabled and s not in self._hidden:
            self._fail(f"committed non-substring {s!r}")

    def whitebox_assert_suffix(self, s: str) -> None:
        if self.whitebox_enabled and not self._hidden.endswith(s):
            self._fail(f"{s!r} is not a suffix")

    def whitebox_assert_anchored_suffix(self, s: str) -> None:
        """``s`` ends the hidden string and occurs nowhere else."""
        if not self.whitebox_enabled:
            return
        h = self._hidden
        if not h.endswith(s) or h.find(s) != len(h) - len(s):
            self._fail(f"{s!r} is not a suffix occurring exactly once")

    def whitebox_assert_prefix(self, s: str) -> None:
        if self.whitebox_enabled and not self._hidden.startswith(s):
            self._fail(f"{s!r} is not a prefix")

    def whitebox_assert_overshoot(self, s: str, side: str = "right") -> None:
        """``s`` is a substring, or a true suffix (prefix) padded with 0s past the end.

        Right-extension by "No, so the other symbol" inference runs past the
        right end by design; the padding is always 0s, which is what the
        0^(d+1) end detector relies on.
        """
        if not self.whitebox_enabled or s in self._hidden:
            return
        h = self._hidden
        if side == "right":
            pad = min(len(s) - len(s.rstrip("0")), len(s) - 1)
            ok = any(h.endswith(s[:len(s) - a]) for a in range(1, pad + 1))
        else:
            pad = min(len(s) - len(s.lstrip("0")), len(s) - 1)
            ok = any(h.startswith(s[a:]) for a in range(1, pad + 1))
        if not ok:
            self._fail(f"{s!r} is neither a substring nor a {side}-end overshoot")

    def whitebox_assert_label(self, context: str, symbol: str, side: str = "right") -> None:
        """Every occurrence of ``context`` is followed (preceded) by ``symbol`` or the end."""
        if not self.whitebox_enabled:
            return
        h, m = self._hidden, len(context)
        i = h.find(context)
        while i >= 0:
            if side == "right":
                nxt = h[i + m:i + m + 1]
            else:
                nxt = h[i - 1:i] if i > 0 else ""
            if nxt and nxt != symbol:
                self._fail(f"label {context!r} -> {symbol} contradicted at position {i + 1}")
            i = h.find(context, i + 1)

    def whitebox_reveal(self) -> str:
        """The hidden string, for harness-side correctness checks only."""
        return self._hidden


def make_oracle(hidden: str, *, transcript: bool = False, whitebox: bool = False) -> Oracle:
    return Oracle(hidden, transcript=transcript, whitebox=whitebox)
