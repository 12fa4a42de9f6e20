from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from oracles import best_cycle_average, golden_entropy, lambda_G, partition_sum_L, s2w
from shiftlab.coded import lambda_G_closed
from shiftlab.models import SFT, FullShift, Staircase, golden_mean
from shiftlab.thermo import (HYPERBOLIC, NOT_HYPERBOLIC, Potential, hyperbolicity_check,
                             log_gstar_sums, max_mean_cycle, partition_sum, phi_word,
                             potential_from_config, pressure_bracket, sup_ergodic_bracket)

RANGE2 = Potential.from_table({"00": 0, "01": 1, "10": 2, "11": 0})


def test_phi_word_examples():
    assert phi_word(Potential.indicator(1), FullShift(), "0110") == -2
    assert phi_word(Potential.zero(), Staircase("const:1"), "0110") == 0
    assert phi_word(RANGE2, golden_mean(), "010") == 4


def test_phi_word_rejects_outside_language():
    with pytest.raises(ValueError):
        phi_word(Potential.zero(), golden_mean(), "11")


def test_partition_sum_examples():
    ps = partition_sum(FullShift(), Potential.indicator(1), "L", 2)
    assert ps.value == pytest.approx((1 + math.exp(-1)) ** 2, rel=1e-14)
    m = Staircase("ceil_n_over:4")
    for n in range(1, 12):
        assert partition_sum(m, Potential.zero(), "L", n).value == pytest.approx(len(m.language(n)))
    g = partition_sum(Staircase("const:1"), Potential.indicator(1), "G", 4).value
    assert g == pytest.approx(math.exp(-1) + math.exp(-2) + math.exp(-3), rel=1e-14)
    assert g == pytest.approx(0.55300, abs=5e-6)


@pytest.mark.parametrize("f", ["const:1", "ceil_n_over:4", "ceil_log2"])
def test_dp_partition_sum_matches_enumeration(f):
    m = Staircase(f)
    for t in (0.1, 1.0):
        for n in range(1, 13):
            dp = partition_sum(m, Potential.indicator(t), "L", n).value
            assert dp == pytest.approx(partition_sum_L(m.language(n).words, t), rel=1e-12)


@pytest.mark.parametrize("f", ["const:1", "ceil_n_over:4", "ceil_log2"])
def test_generator_sums_three_ways(f):
    m = Staircase(f)
    for t in (0.1, 1.0, 5.0):
        for n in range(1, 21):
            ref = lambda_G(m.f, n, t)
            assert partition_sum(m, Potential.indicator(t), "G", n).value == pytest.approx(ref, rel=1e-12, abs=1e-300)
            assert lambda_G_closed(f, n, t) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_range1_additivity_and_multiplicativity():
    m = Staircase("ceil_n_over:4")
    pot = Potential.indicator(0.7)
    for a in range(1, 6):
        for u in m.language(a).words:
            for v in m.language(3).words:
                if m.accepts(u + v):
                    assert phi_word(pot, m, u + v) == pytest.approx(phi_word(pot, m, u) + phi_word(pot, m, v))
    L = [partition_sum(m, pot, "L", n).log_value for n in range(13)]
    G = log_gstar_sums(m, pot, 12)
    for a in range(1, 7):
        for b in range(1, 7):
            assert L[a + b] <= L[a] + L[b] + 1e-12
            if G[a] > -math.inf and G[b] > -math.inf:
                assert G[a + b] >= G[a] + G[b] - 1e-12


def test_gstar_sums_match_enumeration():
    m = Staircase("ceil_log2")
    pot = Potential.indicator(0.5)
    G = log_gstar_sums(m, pot, 12)
    for n in range(1, 13):
        words = m.concat_words(n)
        if words:
            assert G[n] == pytest.approx(math.log(partition_sum_L(words, 0.5)), rel=1e-12)


def test_pressure_brackets():
    pb = pressure_bracket(FullShift(), Potential.zero(), 10)
    assert pb.lower == math.log(2) and pb.upper == math.log(2)
    pb = pressure_bracket(golden_mean(), Potential.zero(), 24)
    assert pb.contains(golden_entropy())
    assert pb.upper - pb.lower < 0.05
    pb = pressure_bracket(Staircase("const:1"), Potential.zero(), 16)
    assert pb.contains(math.log(2))


def test_sup_ergodic_examples():
    for f in ("const:1", "ceil_n_over:4"):
        eb = sup_ergodic_bracket(Staircase(f), Potential.indicator(1), 10)
        assert eb.upper == 0 and eb.lower == 0
    eb = sup_ergodic_bracket(golden_mean(), Potential.range1([-1, -1]), 8)
    assert eb.lower == -1 and eb.upper == -1
    plus = Potential.range1([0, 1])
    eb = sup_ergodic_bracket(golden_mean(), plus, 12)
    assert eb.lower == pytest.approx(0.5)
    ref = best_cycle_average(golden_mean().accepts, [0, 1], 8)
    assert eb.lower == pytest.approx(ref)
    assert eb.lower <= eb.upper


def test_karp_on_small_graph():
    arcs = [(0, 1, 3.0), (1, 0, 1.0), (1, 1, 1.5), (1, 2, 10.0)]
    val, _ = max_mean_cycle(3, arcs)
    assert val == pytest.approx(2.0)


def test_hyperbolicity_examples():
    assert hyperbolicity_check(FullShift(), Potential.zero(), 8).verdict == HYPERBOLIC
    v = hyperbolicity_check(Staircase("const:1"), Potential.indicator(1), 10)
    assert v.verdict == HYPERBOLIC and v.pressure.lower > 0
    v = hyperbolicity_check(Staircase("ceil_n_over:4"), Potential.indicator(1.5653), 10)
    assert v.verdict == NOT_HYPERBOLIC


def test_pressure_monotone_and_nonnegative():
    m = Staircase("ceil_n_over:4")
    prev = math.inf
    for t in [0.1 * k for k in range(0, 31)]:
        up = pressure_bracket(m, Potential.indicator(t), 12).upper
        assert up <= prev + 1e-12
        assert up >= 0
        prev = up


def test_bowen_constant_bounds_birkhoff_gap():
    pot = Potential.from_table({"000": 0.3, "001": -1, "010": 2, "011": 0.5,
                                "100": 0, "101": 1, "110": -0.5, "111": 0.25})
    V = pot.bowen_constant()
    import itertools
    for n in range(1, 6):
        for pre in itertools.product((0, 1), repeat=n):
            sums = []
            for tail in itertools.product((0, 1), repeat=2):
                x = pre + tail
                sums.append(sum(pot.table[x[i:i + 3]] for i in range(n)))
            assert max(sums) - min(sums) <= V + 1e-12


@settings(max_examples=80)
@given(st.integers(1, 16).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 1), min_size=n, max_size=n),
    st.lists(st.integers(0, 1), min_size=n, max_size=n))),
    st.floats(-3, 3), st.floats(-3, 3))
def test_hamming_sum_bound(pair, a, b):
    v, w = pair
    pot = Potential.range1([a, b])
    m = FullShift()
    d = sum(x != y for x, y in zip(v, w))
    assert abs(phi_word(pot, m, v) - phi_word(pot, m, w)) <= pot.spread * d + 1e-9


def test_potential_config():
    assert potential_from_config({"t": 2}).values == (0.0, -2.0)
    assert potential_from_config("zero").values == (0.0, 0.0)
    assert potential_from_config({"table": {"00": 1, "01": 0, "10": 0, "11": 0}}).k == 2
