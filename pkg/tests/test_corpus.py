import re

import numpy as np
import pytest

from strrecon.corpus import (
    FAMILIES,
    Family,
    corpus_rng,
    de_bruijn,
    gen_corpus,
    gen_one,
    mixed_families,
    parse_family,
    trial_seed,
)

from conftest import brute_max_run


def rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


def test_parse_examples():
    assert parse_family("random") == Family("random")
    assert parse_family("periodic:011") == Family("periodic", ("011", 0))
    assert parse_family("periodic:r5:2") == Family("periodic", ("r5", 2))
    assert parse_family("nearend:3:2") == Family("nearend", (3, 2))
    assert parse_family("nearend:3").args == (3,)
    assert parse_family("debruijn:4").spec == "debruijn:4"


@pytest.mark.parametrize("spec", ["bogus", "random:1", "periodic", "periodic:012", "periodic:r0",
                                  "periodic:01:-1", "debruijn:0", "debruijn", "runlength:-1",
                                  "runlength:x", "nearend", "nearend:-1", "nearend:1:0", "nearend:1:2:3"])
def test_parse_rejects(spec):
    with pytest.raises(ValueError):
        parse_family(spec)


def test_fixed_families():
    assert gen_one("allzero", 5, rng()) == "00000"
    assert gen_one("allone", 5, rng()) == "11111"
    assert gen_one("periodic:011", 7, rng()) == "0110110"


def test_periodic_flips():
    s = gen_one("periodic:0", 50, rng(3), 0)
    assert s == "0" * 50
    s = gen_one("periodic:0:4", 50, rng(3), 0)
    assert s.count("1") == 4
    s = gen_one("periodic:r6", 60, rng(5))
    assert s == s[:6] * 10


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 8])
def test_de_bruijn_cycle(order):
    cyc = de_bruijn(order)
    assert len(cyc) == 2 ** order
    wrapped = cyc + cyc[:order - 1]
    windows = {wrapped[i:i + order] for i in range(len(cyc))}
    assert len(windows) == 2 ** order


def test_de_bruijn_known():
    assert de_bruijn(3) == "00010111"


def test_debruijn_family_is_periodic():
    s = gen_one("debruijn:3", 40, rng(1))
    assert all(s[i] == s[i + 8] for i in range(32))


@pytest.mark.parametrize("d", [0, 1, 2, 3, 7, 20])
def test_runlength_exact(d):
    g = rng(d)
    for _ in range(50):
        s = gen_one(f"runlength:{d}", 40, g)
        assert len(s) == 40 and brute_max_run(s) == d


def test_runlength_too_long():
    with pytest.raises(ValueError):
        gen_one("runlength:9", 8, rng())


@pytest.mark.parametrize("offset,d", [(0, 3), (1, 3), (5, 2), (10, 1)])
def test_nearend_position(offset, d):
    g = rng(offset)
    for _ in range(50):
        s = gen_one(f"nearend:{offset}:{d}", 30, g)
        assert brute_max_run(s) == d
        runs = [m for m in re.finditer("0+", s) if len(m.group()) == d]
        assert len(runs) == 1
        assert runs[0].end() == 30 - offset


def test_nearend_too_long():
    with pytest.raises(ValueError):
        gen_one("nearend:5:4", 8, rng())


@pytest.mark.parametrize("n", [1, 2, 8, 64, 1024, 4096])
def test_mixed_specs_valid(n):
    specs = mixed_families(n)
    assert len(specs) == 13
    g = rng(n)
    for t, spec in enumerate(specs):
        parse_family(spec)
        assert len(gen_one(spec, n, g, t)) == n
    assert {parse_family(s).name for s in specs} == set(FAMILIES) - {"mixed"}


def test_mixed_cycles_by_trial():
    specs = mixed_families(64)
    assert gen_one("mixed", 64, rng(), 1) == "0" * 64
    assert gen_one("mixed", 64, rng(), 2 + len(specs)) == "1" * 64


def test_trial_seed_stable():
    assert trial_seed(0, 0) == trial_seed(0, 0)
    assert len({trial_seed(s, t) for s in range(5) for t in range(50)}) == 250
    assert 0 <= trial_seed(9, 3) < 2 ** 64


def test_corpus_independent_of_count():
    a = gen_corpus("random", 32, 10, 42)
    b = gen_corpus("random", 32, 4, 42)
    assert a[:4] == b
    assert len(set(a)) == 10
    assert gen_one("random", 32, corpus_rng(42, 7), 7) == a[7]


def test_bad_n():
    with pytest.raises(ValueError):
        gen_one("random", 0, rng())
