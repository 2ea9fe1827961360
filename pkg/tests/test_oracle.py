import json

import pytest
from hypothesis import given, strategies as st

from strrecon.oracle import Oracle, WhiteboxError, make_oracle


def test_make_oracle():
    o = make_oracle("1011")
    assert (o.n, o.total_queries, o.transcript) == (4, 0, [])
    assert make_oracle("0").n == 1
    with pytest.raises(ValueError):
        make_oracle("")
    with pytest.raises(ValueError):
        make_oracle("10a")


def test_query_examples():
    o = Oracle("10010")
    assert o.query("001")
    assert o.total_queries == 1
    assert not o.query("110010")
    assert o.query("")
    assert o.total_queries == 3


def test_phase_attribution():
    o = Oracle("10010")
    o.query("1")
    o.set_phase("seed-search")
    for _ in range(3):
        o.query("0")
    o.set_phase("other")
    o.query("11")
    assert o.phase_counts == {"default": 1, "seed-search": 3, "other": 1}
    assert sum(o.phase_counts.values()) == o.total_queries


def test_phase_scope_restores():
    o = Oracle("10")
    with o.phase_scope("inner"):
        o.query("1")
        assert o.phase == "inner"
    assert o.phase == "default"
    assert o.phase_counts == {"inner": 1}


def test_transcript_records_and_exports(tmp_path):
    o = Oracle("10010", transcript=True)
    o.query("00")
    o.query("11")
    assert len(o.transcript) == o.total_queries == 2
    lines = o.transcript_jsonl().splitlines()
    assert [json.loads(x) for x in lines] == [
        {"index": 1, "query": "00", "answer": True, "phase": "default"},
        {"index": 2, "query": "11", "answer": False, "phase": "default"},
    ]
    path = tmp_path / "t.jsonl"
    o.write_transcript(path)
    assert path.read_text() == o.transcript_jsonl()


def test_whitebox_substring():
    o = Oracle("10010", whitebox=True)
    o.whitebox_assert_substring("001")
    with pytest.raises(WhiteboxError):
        o.whitebox_assert_substring("111")
    assert o.total_queries == 0
    Oracle("10010").whitebox_assert_substring("111")


def test_whitebox_failure_dumps_transcript():
    o = Oracle("10010", whitebox=True, transcript=True)
    o.query("001")
    with pytest.raises(WhiteboxError) as err:
        o.whitebox_assert_suffix("100")
    assert "Q(001) = 1" in str(err.value)


def test_whitebox_positional_hooks():
    o = Oracle("110100", whitebox=True)
    o.whitebox_assert_prefix("110")
    o.whitebox_assert_suffix("100")
    with pytest.raises(WhiteboxError):
        o.whitebox_assert_prefix("10")
    # a true suffix padded with 0s past the end is an acceptable overshoot
    o.whitebox_assert_overshoot("01000", "right")
    with pytest.raises(WhiteboxError):
        o.whitebox_assert_overshoot("0111", "right")
    # an all-zero string counts only when some shorter run of 0s ends the text
    Oracle("1010", whitebox=True).whitebox_assert_overshoot("000", "right")
    with pytest.raises(WhiteboxError):
        Oracle("1001", whitebox=True).whitebox_assert_overshoot("000", "right")
    o2 = Oracle("011", whitebox=True)
    o2.whitebox_assert_overshoot("0011", "left")
    with pytest.raises(WhiteboxError):
        o2.whitebox_assert_overshoot("0111", "left")


def test_whitebox_label():
    o = Oracle("0110110", whitebox=True)
    o.whitebox_assert_label("11", "0", "right")
    with pytest.raises(WhiteboxError):
        o.whitebox_assert_label("1", "1", "right")
    o.whitebox_assert_label("11", "0", "left")
    o.whitebox_assert_label("0", "1", "left")
    with pytest.raises(WhiteboxError):
        o.whitebox_assert_label("1", "0", "left")


query_ops = st.lists(
    st.tuples(st.sampled_from(["fresh", "right", "left"]), st.text(alphabet="01", max_size=6)),
    max_size=60,
)


@given(st.text(alphabet="01", min_size=1, max_size=80), query_ops)
def test_answers_match_contains(hidden, ops):
    # streams of queries that extend the previous one exercise the occurrence cache
    o = Oracle(hidden, transcript=True)
    last = ""
    for kind, piece in ops:
        q = piece if kind == "fresh" else (last + piece if kind == "right" else piece + last)
        assert o.query(q) == (q in hidden)
        last = q if q in hidden else piece
    assert all(r.answer == (r.query in hidden) for r in o.transcript)


def test_answers_match_on_periodic_text():
    hidden = "011" * 400
    o = Oracle(hidden)
    s = "0"
    for i in range(300):
        for nxt in (s + "1", s + "0", "1" + s, "0" + s):
            assert o.query(nxt) == (nxt in hidden)
        s = hidden[:len(s) + 1]
