"""Acceptance suite: ten criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import random
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, __file__.rsplit("/", 1)[0])

from oracles import has_double_parse, partition_sum_L, staircase_generators
from shiftlab.approach import repair_budget, staircase_repair
from shiftlab.cli import run
from shiftlab.coded import bowen_root, lambda_G_closed, pressure_from_series, series_coefficients, series_eval
from shiftlab.gaplab import bound_report, build_psi, derive_params, enumerate_J
from shiftlab.models import BlockCode, FullShift, Staircase, apply_factor_code, golden_mean
from shiftlab.sequences import parse_sequence
from shiftlab.structure import greedy_decode, sardinas_patterson, staircase_generators as sp_gens
from shiftlab.thermo import NOT_HYPERBOLIC, HYPERBOLIC, Potential, hyperbolicity_check, partition_sum, pressure_bracket
from shiftlab.words import binary_entropy, fit_binomial_constant, hamming_ball, log_binomial

RESULTS: dict = {}


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    line = f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}"
    print(line)
    return line


# 1 ---------------------------------------------------------------------------

def test_criterion_01_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for f in ("const:1", "ceil_n_over:4", "ceil_log2"):
        seq = parse_sequence(f)
        gens = staircase_generators(seq, 20)
        for n in range(1, 21):
            words = [g for g in gens if len(g) == n]
            for t in (0.1, 1.0, 5.0):
                brute = partition_sum_L(words, t)
                closed = lambda_G_closed(f, n, t)
                if brute == 0:
                    assert closed == 0
                else:
                    worst = max(worst, abs(closed - brute) / brute)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 10
    record("1 closed form", ok, f"max rel err {worst:.2e} (<=1e-12), {dt:.2f}s (<10s)")
    assert ok


# 2 ---------------------------------------------------------------------------

def test_criterion_02_pressure_sanity():
    t0 = time.perf_counter()
    zero = Potential.zero()
    full = pressure_bracket(FullShift(), zero, 12)
    ok_full = full.lower == math.log(2) == full.upper
    golden = pressure_bracket(golden_mean(), zero, 24)
    target = 0.481212
    ok_golden = golden.contains(target) and golden.upper - target <= 0.02 and target - golden.lower <= 0.02
    st = pressure_bracket(Staircase("const:1"), zero, 14)
    ok_st = st.contains(math.log(2)) and st.upper - st.lower <= 0.02
    dt = time.perf_counter() - t0
    ok = ok_full and ok_golden and ok_st and dt < 60
    record("2 pressure sanity", ok,
           f"full [{full.lower!r}, {full.upper!r}]; golden [{golden.lower:.6f}, {golden.upper:.6f}]; "
           f"staircase f=1 [{st.lower:.6f}, {st.upper:.6f}]; {dt:.1f}s (<60s)")
    assert ok


# 3 ---------------------------------------------------------------------------

def _sandwich_ok(f="const:1", N_max=8):
    m = Staircase(f)
    worst = []
    for t in (0.3, 1.0, 3.0):
        pot = Potential.indicator(t)
        for N in range(1, N_max + 1):
            c = series_coefficients(f, t, 3 * N)
            A = np.array([1.0] + [partition_sum(m, pot, "L", n).value for n in range(1, 3 * N + 1)])
            # f = 1: every binary word is in the language
            assert np.allclose(A, (1 + math.exp(-t)) ** np.arange(3 * N + 1), rtol=1e-12)
            for x in (0.3, 0.7, 1.0):
                p = x ** np.arange(3 * N + 1)
                lo = (c["CP"][:N + 1] @ p[:N + 1]) * (c["H"][:N + 1] @ p[:N + 1]) * (c["CS"][:N + 1] @ p[:N + 1])
                hi = (c["CP"] @ p) * (c["H"] @ p) * (c["CS"] @ p)
                a = A @ p
                worst.append(lo <= a * (1 + 1e-12) and a <= hi * (1 + 1e-12))
    return all(worst), len(worst)


def test_criterion_03_series_identity():
    s = series_eval("const:1", 1.0, 0.5, 40)
    sand, cases = _sandwich_ok()
    ok_res = s.residual < 1e-8
    record("3 series identity", ok_res and sand,
           f"|H_40 - 1/(1-F_40)| = {s.residual:.4e} (<1e-8: {ok_res}); "
           f"sandwich N<=8 holds in {cases} cases: {sand}")
    assert sand
    assert ok_res, f"residual {s.residual:.4e} at N=40 is the truncation error of H_N"


# 4 ---------------------------------------------------------------------------

def test_criterion_04_bowen_dichotomy():
    t0 = time.perf_counter()
    inf = bowen_root("const:1")
    fin = bowen_root("ceil_n_over:4", 0.5, 1e-3)
    above = pressure_from_series("ceil_n_over:4", fin.t_hi + 0.1)
    below = pressure_from_series("ceil_n_over:4", fin.t_lo - 0.1)
    dt = time.perf_counter() - t0
    ok = (inf.kind == "infinite" and fin.kind == "finite" and fin.width <= 1e-3
          and above.value == 0 and below.value > 0 and dt < 30)
    record("4 Bowen root", ok,
           f"f=1 -> {inf.kind}; f=ceil(n/4) -> [{fin.t_lo:.6f}, {fin.t_hi:.6f}] width {fin.width:.2e}; "
           f"P(t_hi+0.1)={above.value}, P(t_lo-0.1)={below.value:.4e}; {dt:.1f}s (<30s)")
    assert ok


# 5 ---------------------------------------------------------------------------

BUILTINS = ("const:1", "const:2", "ceil_n_over:4", "ceil_log2", "ceil_loglog")


def test_criterion_05_approachability():
    t0 = time.perf_counter()
    total, bad = 0, []
    for f in BUILTINS:
        m = Staircase(f)
        for n in range(2 * m.n1, 15):
            for w in m.language(n):
                r = staircase_repair(w, m)
                total += 1
                if not (r.within_budget and r.distance <= repair_budget(m, n)
                        and greedy_decode(r.repaired, m) is not None):
                    bad.append((f, w))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    record("5 approachability", ok, f"{total} words over 5 built-in f, n<=14; "
                                    f"{len(bad)} failures; {dt:.1f}s (<120s)")
    assert ok


# 6 ---------------------------------------------------------------------------

def test_criterion_06_hyperbolicity_flip():
    fin = bowen_root("ceil_n_over:4", 0.5, 1e-3)
    m = Staircase("ceil_n_over:4")
    below = [fin.t_lo - d for d in (1.0, 0.5, 0.2, 0.05)]
    above = [fin.t_hi + d for d in (0.05, 0.2, 0.5, 1.0)]
    verdicts, supI = {}, []
    for t in below + above:
        v = hyperbolicity_check(m, Potential.indicator(t), 12, tol=1e-6)
        verdicts[t] = v.verdict
        supI.append(v.ergodic.upper)
    ok = (all(verdicts[t] == HYPERBOLIC for t in below)
          and all(verdicts[t] == NOT_HYPERBOLIC for t in above)
          and all(s == 0 for s in supI))
    record("6 hyperbolicity flip", ok,
           ", ".join(f"t={t:.3f}:{'H' if verdicts[t] == HYPERBOLIC else 'N'}" for t in below + above)
           + f"; sup I upper max {max(supI)}")
    assert ok


# 7 ---------------------------------------------------------------------------

def test_criterion_07_decipherability():
    rng = random.Random(2024)
    mismatches = 0
    for _ in range(500):
        k = rng.randint(1, 5)
        code = set()
        while len(code) < k:
            code.add(tuple(rng.randint(0, 1) for _ in range(rng.randint(1, 4))))
        code = sorted(code)
        v = sardinas_patterson(code)
        # any ambiguity of such a code shows up below length 14 (checked per case)
        brute = has_double_parse(code, len(v.witness) if not v.unique else 14)
        if brute == v.unique:
            mismatches += 1
    trunc = sardinas_patterson(sp_gens(Staircase("const:1"), 8)).unique
    ok = mismatches == 0 and trunc
    record("7 decipherability", ok, f"500 random codes, {mismatches} mismatches; "
                                    f"truncation 8 verdict {'unique' if trunc else 'not unique'}")
    assert ok


# 8 ---------------------------------------------------------------------------

def test_criterion_08_gap_lab():
    t0 = time.perf_counter()
    model = FullShift()
    p = derive_params(model, 1.0, 1.0, "const:1")
    rep = bound_report(p)
    flips = [bound_report(p, j) for j in (p.delta_exp - 1, p.delta_exp // 2, 2000)]
    ok_formula = rep["gap_positive"] and all(not r["delta_condition"] and not r["gap_positive"]
                                             for r in flips)
    toy = derive_params(model, 1.0, 1.0, "const:1", m=2)
    rng = random.Random(8)
    inst = bad = 0
    for _ in range(20):
        w = tuple(rng.randint(0, 1) for _ in range(16))
        for k in range(1, 5):
            for parts in enumerate_J(16, 2, k):
                r = build_psi(w, parts, toy, model, "const:1")
                inst += 1
                if not (r.phi_ok and r.betam_ok and r.markers_recovered == k):
                    bad += 1
    dt = time.perf_counter() - t0
    ok = ok_formula and bad == 0 and dt < 30
    record("8 gap-lab", ok, f"delta=2^-{p.delta_exp}, gap {float(rep['gap']):.5f}; "
                            f"flipped gaps {[round(float(r['gap']), 4) for r in flips]}; "
                            f"{inst} toy instances, {bad} failures; {dt:.1f}s (<30s)")
    assert ok


# 9 ---------------------------------------------------------------------------

def test_criterion_09_counting():
    over = 0
    for A in (2, 3):
        for m in range(1, 13):
            for k in range(m + 1):
                hb = hamming_ball((0,) * m, k, A, cap=10 ** 7)
                if hb.count is not None and hb.count > hb.binomial_bound:
                    over += 1
                if hb.exact_bound > hb.binomial_bound:
                    over += 1
    c = fit_binomial_constant(10 ** 4)
    rng = random.Random(9)
    viol = 0
    for _ in range(2000):
        m = rng.randint(2, 10 ** 4)
        k = rng.randint(0, m)
        exact = math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1)
        if abs(exact - m * binary_entropy(k / m)) > c * math.log(m) + 1e-9 * m:
            viol += 1
        assert log_binomial(m, k) == pytest.approx(exact, rel=1e-9, abs=1e-9)
    ok = over == 0 and viol == 0
    record("9 counting bounds", ok, f"ball bound exceeded {over} times (m<=12); "
                                    f"c = {c:.6f} for m<=10^4, {viol} sampled violations")
    assert ok


# 10 --------------------------------------------------------------------------

def test_criterion_10_factor():
    model = FullShift()
    g = parse_sequence("const:1")
    ident = BlockCode.from_function(0, 2, lambda w: w[0], 2)
    same = True
    for n in range(1, 9):
        image, gt = apply_factor_code(model, ident, g, n)
        same &= image.word_set == model.language(n).word_set and gt(n) == 3 * g(n)
    formulas = {}
    for r in (0, 1, 2):
        rep = run({"command": "factor", "params": {"r": r, "code": "sum", "n_max": 4}})
        formulas[r] = rep["result"]["formula"]
        same &= all(row["g_tilde"] == (4 * r + 3) * g(row["n"] + 2 * r) + 4 * r for row in rep["rows"])
    ok = same and all(v == "(4r+3)g(n+2r)+4r" for v in formulas.values())
    record("10 factor transfer", ok, f"identity r=0 reproduces L_n and g~=3g; formula {formulas[0]} "
                                     f"for r in 0,1,2")
    assert ok


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
