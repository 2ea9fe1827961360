import itertools

import numpy as np
import pytest

from strrecon.average import reconstruct_average
from strrecon.basic import basic
from strrecon.bitstr import all_strings
from strrecon.oracle import Oracle
from strrecon.verify import CandidateSet, check_run, membership


def test_membership_matches_naive():
    for n in range(1, 8):
        for m in range(0, n + 2):
            for pat in map("".join, itertools.product("01", repeat=m)):
                vec = membership(n, pat)
                expected = [pat in h for h in all_strings(n)]
                assert vec.tolist() == expected


def test_membership_is_read_only():
    with pytest.raises(ValueError):
        membership(4, "01")[0] = True


def test_filter_examples():
    cs = CandidateSet(3)
    assert len(cs) == 8
    cs.filter("11", True)
    assert cs.members() == ["011", "110", "111"]
    cs.filter("0", False)
    assert cs.members() == ["111"]
    assert "111" in cs and "011" not in cs and "11" not in cs


def test_lazy_set():
    cs = CandidateSet(30)
    assert not cs.materialized
    cs.filter("01", True).filter("000", False)
    assert "0" * 10 + "1" * 20 not in cs
    assert "01" * 15 in cs
    with pytest.raises(TypeError):
        len(cs)
    with pytest.raises(TypeError):
        cs.members()


def test_candidate_set_rejects_empty():
    with pytest.raises(ValueError):
        CandidateSet(0)


def _basic_run(h):
    o = Oracle(h, transcript=True)
    d = max((len(r) for r in h.split("1")), default=0)
    return o, basic(o, "0" * d, "0" * (d + 1), len(h))


def test_check_run_passes_on_real_runs():
    for h in all_strings(8):
        o, result = _basic_run(h)
        v = check_run(o.transcript, result, h)
        assert v.ok and v.info_bound
        assert v.final_size >= 1


def test_forced_flag():
    # average-case runs end with a singleton candidate set on these inputs
    forced = 0
    for h in all_strings(6):
        o = Oracle(h, transcript=True)
        result = reconstruct_average(o, 6)
        v = check_run(o.transcript, result, h)
        assert v.ok
        forced += v.forced
    assert forced > 0


def test_tampered_answer_is_clause_a():
    o, result = _basic_run("01101")
    recs = [dict(index=r.index, query=r.query, answer=r.answer) for r in o.transcript]
    recs[2]["answer"] = not recs[2]["answer"]
    v = check_run(recs, result, "01101")
    assert not v.ok and v.clause == "a" and v.index == recs[2]["index"]


def test_wrong_result_is_clause_b():
    o, _ = _basic_run("01101")
    v = check_run(o.transcript, "01100", "01101")
    assert not v.ok and v.clause == "b"


def test_too_few_queries_is_info():
    # one lucky Yes pins 00000 after a single query, below log2(2^5 / 1)
    o = Oracle("00000", transcript=True)
    o.query("00000")
    v = check_run(o.transcript, "00000", "00000")
    assert not v.ok and v.clause == "info" and v.info_bound is False


def test_info_bound_arithmetic():
    h = "0110"
    o = Oracle(h, transcript=True)
    for q in ("00", "11", "011", "0110"):
        o.query(q)
    v = check_run(o.transcript, h, h)
    cs = CandidateSet(4)
    for q in ("00", "11", "011", "0110"):
        cs.filter(q, q in h)
    assert v.final_size == len(cs)
    assert v.ok == (np.log2(16 / len(cs)) <= 4)
