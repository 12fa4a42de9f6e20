from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import nearest, s2w, staircase_gstar
from shiftlab.approach import (approachability_report, far_word, nearest_in_class,
                               repair_budget, staircase_repair)
from shiftlab.models import FullShift, Staircase, golden_mean
from shiftlab.structure import greedy_decode
from shiftlab.words import fmt, hamming

F3 = ["const:1", "ceil_n_over:4", "ceil_log2"]


def test_nearest_examples():
    m = Staircase("const:1")
    assert nearest_in_class("0011", m.generator_words(4)) == (s2w("0011"), 0)
    gstar = m.concat_words(4)
    assert sorted(fmt(w) for w in gstar) == ["0001", "0011", "0101", "0111"]
    assert nearest_in_class("1100", gstar) == (s2w("0101"), 2)
    assert nearest_in_class("0000", ["1111"])[1] == 4
    with pytest.raises(ValueError):
        nearest_in_class("00", [])


@pytest.mark.parametrize("f", F3)
def test_nearest_against_oracle(f):
    m = Staircase(f)
    for n in (6, 9):
        cls = staircase_gstar(m.f, n)
        assert sorted(m.concat_words(n)) == cls
        for w in m.language(n):
            v, d = nearest_in_class(w, cls)
            assert (v, d) == nearest(w, cls)
            assert (d == 0) == (w in set(cls))


def test_repair_examples():
    m = Staircase("const:1")
    assert m.n1 == 2
    r = staircase_repair("0011", m)
    assert r.repaired == s2w("0011") and r.distance == 0
    r = staircase_repair("000000", m)
    assert fmt(r.repaired) == "000001" and r.distance == 1 and r.cases == ("single:high",)
    assert r.distance <= m.n1 + m.f(6)
    r = staircase_repair("1100", m)
    assert r.budget == 8 and r.within_budget and m.in_concatenation(r.repaired)


def test_repair_errors():
    m = Staircase("ceil_n_over:4")
    with pytest.raises(ValueError):
        staircase_repair("01", m)
    with pytest.raises(ValueError):
        staircase_repair("010", Staircase("const:2"))


@pytest.mark.parametrize("f", F3)
def test_repair_exhaustive(f):
    m = Staircase(f)
    for n in range(2 * m.n1, 13):
        for w in m.language(n):
            r = staircase_repair(w, m)
            assert r.within_budget, (fmt(w), r)
            assert r.distance == hamming(w, r.repaired)
            assert greedy_decode(r.repaired, m) is not None


def test_far_word_examples():
    full4 = FullShift().language(4)
    fw = far_word(full4, ["0000"], 0.25)
    assert fmt(fw.word) == "0011"
    first = next(w for w in full4 if sum(w) > 1)
    assert fw.word == first
    fw = far_word(FullShift().language(1), ["0", "1"], 0.5)
    assert not fw.found and fw.covered_bound >= fw.class_size
    rng = random.Random(3)
    g6 = list(golden_mean().language(6))
    targets = rng.sample(g6, 2)
    fw = far_word(g6, targets, 0.3)
    assert fw.found and all(hamming(fw.word, t) >= 2 for t in targets)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 6), st.floats(0.05, 0.9), st.randoms(use_true_random=False))
def test_far_word_not_found_is_covered(m, k, beta, rnd):
    cls = list(FullShift().language(m))
    targets = [rnd.choice(cls) for _ in range(k)]
    fw = far_word(cls, targets, beta)
    if not fw.found:
        assert fw.covered_bound >= fw.class_size
    else:
        assert all(hamming(fw.word, t) > beta * m for t in targets)


def test_approach_reports():
    m = Staircase("const:1")
    rows = approachability_report(m, "G*", lambda n: repair_budget(m, n), range(4, 13))
    assert all(r.passed for r in rows)
    full = FullShift()
    rows = approachability_report(full, "L", lambda n: 0, range(1, 9))
    assert all(r.passed and r.worst_distance == 0 for r in rows)
    q = Staircase("ceil_n_over:4")
    row = approachability_report(q, "G*", lambda n: 1, [12])[0]
    assert row.passed is False and row.worst_distance > 1 and row.witness is not None


def test_report_out_of_scope():
    m = Staircase("ceil_n_over:4")
    rows = approachability_report(m, "G*", lambda n: 99, range(1, 6), n_min=2 * m.n1)
    assert [r.status for r in rows[:2 * m.n1 - 1]] == ["out-of-scope"] * (2 * m.n1 - 1)
