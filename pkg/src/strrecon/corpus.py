"""Test corpora: hidden strings chosen to steer the reconstruction into each of its branches.

Family specs are colon-separated strings:

``random``, ``allzero``, ``allone``
``periodic:BLOCK[:FLIPS]``  BLOCK is literal bits or ``rK`` for a random block of length K
``debruijn:ORDER``          a random rotation of the binary de Bruijn cycle, repeated to length n
``runlength:D``             random string whose longest 0-run is exactly D
``nearend:OFFSET[:D]``      a unique longest 0-run of length D ending OFFSET symbols before the end
``mixed``                   cycles through a list of the above scaled to n (by trial index)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .average import floor_log2
from .bitstr import BitString

FAMILIES = ("random", "allzero", "allone", "periodic", "debruijn", "runlength", "nearend", "mixed")


@dataclass(frozen=True)
class Family:
    name: str
    args: tuple = ()

    @property
    def spec(self) -> str:
        return ":".join((self.name,) + tuple(str(a) for a in self.args))


def parse_family(spec: str) -> Family:
    name, *args = spec.split(":")
    if name not in FAMILIES:
        raise ValueError(f"unknown corpus family {name!r}; choose from {', '.join(FAMILIES)}")
    try:
        if name in ("random", "allzero", "allone", "mixed"):
            if args:
                raise ValueError(f"{name} takes no arguments")
            return Family(name)
        if name == "periodic":
            if not 1 <= len(args) <= 2:
                raise ValueError("periodic needs BLOCK[:FLIPS]")
            block = args[0]
            if block.startswith("r"):
                if int(block[1:]) < 1:
                    raise ValueError("random block length must be positive")
            else:
                block = str(BitString(block))
                if not block:
                    raise ValueError("empty periodic block")
            flips = int(args[1]) if len(args) > 1 else 0
            if flips < 0:
                raise ValueError("flip count must be non-negative")
            return Family(name, (block, flips))
        if name == "debruijn":
            if len(args) != 1 or int(args[0]) < 1:
                raise ValueError("debruijn needs a positive ORDER")
            return Family(name, (int(args[0]),))
        if name == "runlength":
            if len(args) != 1 or int(args[0]) < 0:
                raise ValueError("runlength needs D >= 0")
            return Family(name, (int(args[0]),))
        if not 1 <= len(args) <= 2:
            raise ValueError("nearend needs OFFSET[:D]")
        offset = int(args[0])
        run = int(args[1]) if len(args) > 1 else None
        if offset < 0 or (run is not None and run < 1):
            raise ValueError("nearend needs OFFSET >= 0 and D >= 1")
        return Family(name, (offset, run) if run is not None else (offset,))
    except ValueError as exc:
        raise ValueError(f"bad family spec {spec!r}: {exc}") from None


def mixed_families(n: int) -> list[str]:
    """The structured rotation used by ``mixed``; every entry is valid for this n."""
    log_n = max(floor_log2(n), 1)
    small = max(1, log_n // 3)
    out = [
        "random",
        "allzero",
        "allone",
        "periodic:011:0",
        "periodic:011:1",
        f"periodic:r{log_n}:1",
        f"periodic:r{2 * log_n}:2",
        f"debruijn:{max(1, log_n - 2)}",
        f"debruijn:{max(1, log_n // 2)}",
        f"runlength:{min(small, n)}",
        f"runlength:{min(small + 1, n)}",
        f"nearend:{max(0, n // 200)}:{min(small + 1, n)}",
        f"nearend:0:{min(small, n)}",
    ]
    return out


def _bits(rng: np.random.Generator, n: int) -> str:
    return "".join("1" if b else "0" for b in rng.integers(0, 2, size=n))


def de_bruijn(order: int) -> str:
    """Binary de Bruijn cycle of the given order (Fredricksen-Kessler-Maiorana)."""
    a = [0] * (order + 1)
    out: list[int] = []

    def gen(t: int, p: int) -> None:
        if t > order:
            if order % p == 0:
                out.extend(a[1:p + 1])
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        if a[t - p] == 0:
            a[t] = 1
            gen(t + 1, t)

    gen(1, 1)
    return "".join(map(str, out))


def _capped_random(rng: np.random.Generator, n: int, cap: int) -> list[str]:
    """Random bits with every 0-run forced to length <= cap."""
    raw = rng.integers(0, 2, size=n)
    out = []
    run = 0
    for b in raw:
        if b == 0 and run < cap:
            out.append("0")
            run += 1
        else:
            out.append("1")
            run = 0
    return out


def _place_run(s: list[str], start: int, d: int) -> str:
    n = len(s)
    s[start:start + d] = ["0"] * d
    if start > 0:
        s[start - 1] = "1"
    if start + d < n:
        s[start + d] = "1"
    return "".join(s)


def gen_one(family: Family | str, n: int, rng: np.random.Generator, trial: int = 0) -> str:
    if isinstance(family, str):
        family = parse_family(family)
    if n < 1:
        raise ValueError("n must be positive")
    name = family.name
    if name == "mixed":
        specs = mixed_families(n)
        return gen_one(specs[trial % len(specs)], n, rng, trial)
    if name == "random":
        return _bits(rng, n)
    if name == "allzero":
        return "0" * n
    if name == "allone":
        return "1" * n
    if name == "periodic":
        block, flips = family.args
        if block.startswith("r"):
            block = _bits(rng, int(block[1:]))
        s = list((block * (n // len(block) + 1))[:n])
        for pos in rng.choice(n, size=min(flips, n), replace=False):
            s[pos] = "1" if s[pos] == "0" else "0"
        return "".join(s)
    if name == "debruijn":
        cycle = de_bruijn(family.args[0])
        shift = int(rng.integers(0, len(cycle)))
        cycle = cycle[shift:] + cycle[:shift]
        return (cycle * (n // len(cycle) + 1))[:n]
    if name == "runlength":
        d = family.args[0]
        if d > n:
            raise ValueError(f"run length {d} exceeds n={n}")
        if d == 0:
            return "1" * n
        start = int(rng.integers(0, n - d + 1))
        return _place_run(_capped_random(rng, n, d), start, d)
    offset = family.args[0]
    d = family.args[1] if len(family.args) > 1 else max(1, floor_log2(n) // 3)
    if offset + d > n:
        raise ValueError(f"offset {offset} + run {d} exceeds n={n}")
    return _place_run(_capped_random(rng, n, d - 1), n - offset - d, d)


def trial_seed(master: int, trial: int) -> int:
    """Per-trial 64-bit seed; independent of how trials are split across workers."""
    seq = np.random.SeedSequence(master, spawn_key=(trial,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def corpus_rng(master: int, trial: int) -> np.random.Generator:
    # stream 0 of the trial seed; the algorithm seeds PCG64 from the trial seed itself
    seq = np.random.SeedSequence(trial_seed(master, trial), spawn_key=(0,))
    return np.random.Generator(np.random.PCG64(seq))


def gen_corpus(family: Family | str, n: int, count: int, rng_seed: int) -> list[str]:
    """``count`` strings; string ``t`` depends only on ``(family, n, rng_seed, t)``."""
    return [gen_one(family, n, corpus_rng(rng_seed, t), t) for t in range(count)]
