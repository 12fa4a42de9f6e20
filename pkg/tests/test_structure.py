from __future__ import annotations

import random

import pytest

from oracles import decompositions, factorizations, has_double_parse, s2w
from shiftlab.models import FullShift, Staircase, golden_mean
from shiftlab.structure import (count_parses, free_concat_check, greedy_decode, local_spec_sets,
                                sardinas_patterson, staircase_decompose, staircase_generators,
                                staircase_splits)
from shiftlab.thermo import partition_sum, Potential
from shiftlab.words import fmt


def test_sp_examples():
    v = sardinas_patterson(["0", "01", "10"])
    assert not v.unique and fmt(v.witness) == "010"
    a, b = v.parses
    assert a != b and sum(a, ()) == sum(b, ()) == v.witness
    assert sardinas_patterson(["0", "01", "11"]).unique


def random_code(rng):
    k = rng.randint(1, 5)
    code = set()
    while len(code) < k:
        n = rng.randint(1, 4)
        code.add(tuple(rng.randint(0, 1) for _ in range(n)))
    return sorted(code)


def test_sp_against_brute_force():
    rng = random.Random(7)
    for _ in range(300):
        code = random_code(rng)
        v = sardinas_patterson(code)
        bound = 2 * max(len(c) for c in code)
        if v.unique:
            assert not has_double_parse(code, max(bound, 14))
        else:
            assert len(factorizations(v.witness, code)) >= 2
            assert has_double_parse(code, len(v.witness))
            assert not has_double_parse(code, len(v.witness) - 1)


def test_count_parses():
    assert count_parses(s2w("010"), [s2w("0"), s2w("01"), s2w("10")]) == 2
    assert count_parses(s2w("0011"), [s2w("0011")]) == 1
    assert count_parses(s2w("11"), [s2w("0")]) == 0


@pytest.mark.parametrize("f", ["const:1", "ceil_n_over:4", "ceil_log2", "const:2"])
@pytest.mark.parametrize("L", [6, 8, 10])
def test_truncated_generators_unique(f, L):
    assert sardinas_patterson(staircase_generators(Staircase(f), L)).unique


def test_decompose_examples():
    m = Staircase("const:1")
    d = staircase_decompose("1100", m)
    assert (fmt(d.prefix), d.core, fmt(d.suffix)) == ("11", (), "00")
    d = staircase_decompose("0011", m)
    assert (fmt(d.prefix), [fmt(g) for g in d.core], fmt(d.suffix)) == ("", ["0011"], "")
    d = staircase_decompose("10", m)
    assert (fmt(d.prefix), d.core, fmt(d.suffix)) == ("1", (), "0")
    with pytest.raises(ValueError):
        staircase_decompose("010", Staircase("const:2"))


@pytest.mark.parametrize("f", ["const:1", "ceil_n_over:4", "ceil_log2", "const:2"])
def test_splits_match_oracle(f):
    m = Staircase(f)
    for n in range(1, 11):
        for w in m.language(n):
            assert sorted(staircase_splits(w, m)) == decompositions(w, m.f)
            d = staircase_decompose(w, m)
            assert d.reassemble() == w


@pytest.mark.parametrize("f", ["const:1", "ceil_n_over:4"])
def test_decomposition_unique(f):
    m = Staircase(f)
    for n in range(1, 13):
        for w in m.language(n):
            assert staircase_decompose(w, m).unique


def test_decomposition_ambiguity_for_log2():
    m = Staircase("ceil_log2")
    amb = [fmt(w) for n in range(1, 13) for w in m.language(n) if not staircase_decompose(w, m).unique]
    assert amb == ["01", "0011"]


def test_greedy_decode():
    m = Staircase("const:1")
    assert [fmt(g) for g in greedy_decode("0011001", m)] == ["0011", "001"]
    assert greedy_decode("0110", m) is None


@pytest.mark.parametrize("f", ["const:1", "ceil_n_over:4", "ceil_log2"])
def test_dg_growth(f):
    m = Staircase(f)
    for n in range(1, 21):
        assert len(m.dg_words(n)) <= n + 1
        assert partition_sum(m, Potential.zero(), "D(G)", n).count <= n + 1


def test_free_concat():
    m = Staircase("const:1")
    classes = [m.concat_words(n) for n in range(2, 7)]
    assert free_concat_check(classes, m.in_concatenation).free
    assert free_concat_check([FullShift().language(n) for n in (1, 2, 3)], FullShift().accepts).free
    g = golden_mean()
    v = free_concat_check([g.language(2)], g.accepts)
    assert not v.free
    assert v.witness == (s2w("01"), s2w("10"))


def test_local_spec_sets():
    full = FullShift()
    assert local_spec_sets(full, 0, 4).words == full.language(4).words
    g = golden_mean()
    assert [fmt(w) for w in local_spec_sets(g, 0, 3)] == ["000", "010", "100"]
    assert local_spec_sets(g, 1, 3).words == g.language(3).words
    with pytest.raises(TypeError):
        local_spec_sets(Staircase("const:1"), 0, 3)
