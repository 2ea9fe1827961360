"""Binary strings and the structural operations used by every reconstruction routine.

Strings are plain ``str`` objects over the alphabet ``{'0', '1'}``.  Positions in
the public helpers are 1-based to match the usual ``S[1] ... S[m]`` notation;
``prefix(S, i)`` is ``S[1..i]`` and ``suffix(S, i)`` is ``S[m-i+1..m]``.

:class:`BitString` is a validated ``str`` subclass for values that enter the
system from outside (CLI arguments, corpora).  Internally the algorithms work on
plain ``str`` because concatenation and substring search are implemented in C.
"""

from __future__ import annotations

from typing import Iterable

ALPHABET = "01"
_FLIP = {"0": "1", "1": "0"}


class BitString(str):
    """Immutable binary string; rejects any character other than '0' and '1'."""

    __slots__ = ()

    def __new__(cls, bits: str = "") -> "BitString":
        if isinstance(bits, BitString):
            return bits
        s = str(bits)
        if s.strip(ALPHABET):
            bad = sorted(set(s) - set(ALPHABET))
            raise ValueError(f"not a binary string: unexpected {bad!r}")
        return super().__new__(cls, s)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        """Most significant bit first, so ``from_int(6, 4) == '0110'``."""
        if value < 0 or (length < value.bit_length()):
            raise ValueError(f"{value} does not fit in {length} bits")
        return cls(format(value, f"0{length}b") if length else "")

    def to_int(self) -> int:
        return int(self, 2) if self else 0

    def __repr__(self) -> str:
        return f"BitString({str.__repr__(self)})"


def flip(symbol: str) -> str:
    return _FLIP[symbol]


def _need_nonempty(s: str, op: str) -> None:
    if not s:
        raise ValueError(f"{op} of the empty string is undefined")


def prefix(s: str, i: int) -> str:
    if not 0 <= i <= len(s):
        raise ValueError(f"prefix length {i} out of range for |S|={len(s)}")
    return s[:i]


def suffix(s: str, i: int) -> str:
    if not 0 <= i <= len(s):
        raise ValueError(f"suffix length {i} out of range for |S|={len(s)}")
    return s[len(s) - i:]


def parent(s: str) -> str:
    _need_nonempty(s, "parent")
    return s[:-1]


def sibling(s: str) -> str:
    """Last symbol complemented."""
    _need_nonempty(s, "sibling")
    return s[:-1] + _FLIP[s[-1]]


def sibling_left(s: str) -> str:
    """First symbol complemented."""
    _need_nonempty(s, "sibling_left")
    return _FLIP[s[0]] + s[1:]


def parent_left(s: str) -> str:
    _need_nonempty(s, "parent_left")
    return s[1:]


def contains(haystack: str, needle: str) -> bool:
    return needle in haystack


def naive_contains(haystack: str, needle: str) -> bool:
    """Quadratic reference scan, kept independent of ``str.__contains__``."""
    m = len(needle)
    for start in range(len(haystack) - m + 1):
        for k in range(m):
            if haystack[start + k] != needle[k]:
                break
        else:
            return True
    return False


def distinct_substrings(s: str, k: int) -> set[str]:
    return {s[i:i + k] for i in range(len(s) - k + 1)}


def longest_zero_run(s: str) -> int:
    return max((len(run) for run in s.split("1")), default=0)


def all_strings(n: int) -> Iterable[str]:
    """Every binary string of length ``n`` in increasing numeric order."""
    if n == 0:
        yield ""
        return
    fmt = f"0{n}b"
    for v in range(1 << n):
        yield format(v, fmt)


class SubstringIndex:
    """Online suffix automaton over a binary string that only grows at the end.

    ``pattern in index`` answers substring membership in ``O(|pattern|)``
    regardless of the indexed length, and :meth:`append` is amortised ``O(1)``.
    """

    __slots__ = ("_next0", "_next1", "_link", "_len", "_last", "_size")

    def __init__(self, text: str = "") -> None:
        self._next0 = [-1]
        self._next1 = [-1]
        self._link = [-1]
        self._len = [0]
        self._last = 0
        self._size = 0
        self.extend(text)

    def __len__(self) -> int:
        return self._size

    def extend(self, text: str) -> None:
        for c in text:
            self.append(c)

    def append(self, c: str) -> None:
        nxt = self._next1 if c == "1" else self._next0
        if c not in _FLIP:
            raise ValueError(f"not a binary symbol: {c!r}")
        link, length = self._link, self._len
        cur = len(length)
        self._next0.append(-1)
        self._next1.append(-1)
        link.append(0)
        length.append(length[self._last] + 1)
        p = self._last
        while p != -1 and nxt[p] == -1:
            nxt[p] = cur
            p = link[p]
        if p != -1:
            q = nxt[p]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = len(length)
                self._next0.append(self._next0[q])
                self._next1.append(self._next1[q])
                link.append(link[q])
                length.append(length[p] + 1)
                while p != -1 and nxt[p] == q:
                    nxt[p] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        self._last = cur
        self._size += 1

    def __contains__(self, pattern: str) -> bool:
        state = 0
        n0, n1 = self._next0, self._next1
        for c in pattern:
            state = n1[state] if c == "1" else n0[state]
            if state == -1:
                return False
        return True
