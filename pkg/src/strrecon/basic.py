"""One-symbol extension machinery and the generalised Skiena-Sundaram procedure.

All routines take an :class:`~strrecon.oracle.Oracle` and plain binary strings.
Soundness notes that matter when composing these:

* Right-extending a substring ``X`` by "No for X1, so X0" is sound unless every
  occurrence of ``X`` touches the right end; past that point the appended
  symbols are 0s that do not occur, which is what the ``0^(d+1)`` end
  detector is for.
* Once a string is known to occur exactly once, every further extension of it
  stays anchored to that occurrence.
"""

from __future__ import annotations

from .bitstr import flip
from .oracle import Oracle


def extend_left(o: Oracle, s: str) -> str:
    t = "1" + s
    return t if o.query(t) else "0" + s


def extend_right(o: Oracle, s: str) -> str:
    t = s + "1"
    return t if o.query(t) else s + "0"


def find_right_end(o: Oracle, s_over: str, t: str) -> str:
    """Trim an overshoot ``S'T`` back to the true suffix ``S'T[1..j]``.

    Probes ``S'T[1]``, ``S'T[1..2]``, ... and stops at the first No, so it
    spends ``j + 1`` queries (``j`` when the whole of ``T`` confirms).
    """
    if not s_over.endswith(t):
        raise ValueError("s_over must end with t")
    base = s_over[:len(s_over) - len(t)]
    j = 0
    while j < len(t) and o.query(base + t[:j + 1]):
        j += 1
    return base + t[:j]


def find_left_end(o: Oracle, s_over: str, d: int) -> str:
    """Mirror of :func:`find_right_end` for a run of 0s prepended past the left end.

    ``s_over`` is ``0^a S'`` with ``S'`` starting with 1 (``a`` is normally
    ``d + 1``).  Probes ``0S'``, ``00S'``, ... upward and stops at the first No.
    """
    body = s_over.lstrip("0")
    if len(s_over) - len(body) > d + 1:
        raise ValueError(f"more than {d + 1} leading zeros")
    j = 0
    while o.query("0" * (j + 1) + body):
        j += 1
    return "0" * j + body


def fill(o: Oracle, p: str, s: str, n: int) -> str:
    """Complete the hidden string from a true prefix ``p`` and a true suffix ``s``.

    ``s`` must occur only once in the hidden string; otherwise a Yes for
    ``1s`` may come from another occurrence and the growth drifts away from
    the right end.  The suffix is grown leftwards one query per symbol.  With a non-empty
    prefix one extra query confirms ``p + s``; if it fails the suffix alone is
    grown to full length.
    """
    if len(p) + len(s) > n:
        raise ValueError(f"|P|+|S| = {len(p) + len(s)} exceeds n = {n}")
    if not s and len(p) < n:
        # growing the empty string leftwards pins nothing to the right end
        raise ValueError("fill needs a non-empty suffix")
    if s:
        o.whitebox_assert_anchored_suffix(s)
    while len(p) + len(s) < n:
        s = extend_left(o, s)
        o.whitebox_assert_suffix(s)
    if not p:
        return s
    if o.query(p + s):
        return p + s
    while len(s) < n:
        s = extend_left(o, s)
    return s


def basic(o: Oracle, s: str, t: str, n: int) -> str:
    """Reconstruct from a known substring ``s`` and known non-substring ``t``.

    Spends exactly ``n - |s| + |t| + 1`` queries.
    """
    if not t:
        raise ValueError("the non-substring T must be non-empty")
    o.whitebox_assert_substring(s)
    i = 1
    while i <= len(t):
        cand = s + t[:i - 1] + flip(t[i - 1])
        if o.query(cand):
            s = cand
            i = 1
        else:
            i += 1
    s = find_right_end(o, s + t, t)
    o.whitebox_assert_suffix(s)
    while len(s) < n:
        s = extend_left(o, s)
        o.whitebox_assert_suffix(s)
    return s
