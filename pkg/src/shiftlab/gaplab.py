"""Entropy-gap laboratory.

Two modes.  ``formula``: derive the parameter tuple (V, beta, m, gamma, K, L,
delta) honestly and evaluate the closed-form entropy/error bounds at 256-bit
precision (delta is far below double range).  ``toy``: small m, explicit
partitions, and actual construction of the spliced words psi(n) with every
instance-level inequality checked exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .approach import far_word
from .models import SFT, FullShift, ShiftModel, Staircase
from .sequences import IntSequence, parse_sequence
from .thermo import Potential, pressure_bracket
from .words import Word, ball_size, binary_entropy, fmt, hamming

PREC_BITS = 256
RUN_SCAN_LIMIT = 100_000


# ---------------------------------------------------------------- closed-form helpers

def bowen_V(alpha: float, C: float) -> float:
    if alpha <= 0 or C < 0:
        raise ValueError("need alpha > 0 and C >= 0")
    return C / (1 - 2.0 ** (-alpha))


@dataclass(frozen=True)
class KThreshold:
    """K with g(n) < gamma log n for all n > K; ``K`` is None when too large
    to hold as a machine integer (then only log K is reported)."""
    log_K: float
    K: Optional[int]
    method: str


def _K_from_log(log_k: float) -> Optional[int]:
    if log_k < 0:
        return 0
    if log_k > 600:
        return None
    with mpmath.workprec(PREC_BITS):
        return int(mpmath.floor(mpmath.e ** mpmath.mpf(log_k)))


def threshold_K(g, gamma: float) -> KThreshold:
    """Smallest K with g(n) < gamma log n for every n > K."""
    g = parse_sequence(g)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    worst = -math.inf            # log of the last bad n
    if g.name == "ceil_loglog":
        v = g(1)
        while True:
            log_start = math.e ** (v - 1) if v >= 1 else 0.0   # log of run start, up to O(e)
            if log_start > v / gamma:
                break
            log_end = math.e ** v if v < 700 else math.inf
            worst = max(worst, min(log_end, v / gamma))
            v += 1
        return KThreshold(worst, _K_from_log(worst), "analytic:ceil_loglog")
    # nondecreasing g: walk runs of constant value
    n, runs = 1, 0
    scan_end = 1 << 62
    while n <= scan_end:
        v = g(n)
        if g.bound is not None and v == g.bound and _is_final(g, n):
            if math.log(n) <= v / gamma:
                worst = max(worst, v / gamma)
            return KThreshold(worst, _K_from_log(worst), "eventually-constant")
        end = _run_end(g, n, scan_end)
        if math.log(n) <= v / gamma:
            worst = max(worst, min(math.log(end), v / gamma))
        n = end + 1
        runs += 1
        if runs > RUN_SCAN_LIMIT:
            break
    raise ValueError(f"{g.name}: no K found; g does not look sublogarithmic at gamma={gamma}")


def _is_final(g: IntSequence, n: int) -> bool:
    spec = g.spec
    if isinstance(spec, dict):
        return n > len(spec["table"])
    return True


def _run_end(g: IntSequence, start: int, limit: int) -> int:
    v = g(start)
    lo, step = start, 1
    while lo + step <= limit and g(lo + step) == v:
        lo += step
        step *= 2
    hi = min(lo + step, limit + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if g(mid) == v:
            lo = mid
        else:
            hi = mid
    return lo


def _g_at_log(g: IntSequence, log_n: float) -> int:
    """g(n) for n = e^log_n, also when n is far beyond machine integers."""
    if log_n < 40:
        return g(max(1, int(math.exp(log_n))))
    if g.bound is not None:
        return g.bound
    if g.name == "ceil_loglog":
        return math.ceil(math.log(log_n))
    raise ValueError(f"cannot evaluate {g.name} at n = e^{log_n}")


def delta_condition(delta_log: float, V: float, m: int, beta: float, L: float,
                    gamma: float) -> Tuple[bool, float, float]:
    """The choice-of-delta inequality with delta = e^-delta_log.
    Returns (holds, lhs, rhs)."""
    with mpmath.workprec(PREC_BITS):
        ld = mpmath.mpf(delta_log)
        lhs = ld / (8 * m * m)
        rhs = 2 * mpmath.log((2 * L + gamma * ld) / (beta * m)) + 4 * V * L
        return bool(lhs > rhs), float(lhs), float(rhs)


def choose_delta_exponent(V: float, m: int, beta: float, L: float, gamma: float) -> int:
    """Smallest j such that delta = 2^-j satisfies the delta inequality."""
    def ok(j):
        return delta_condition(j * math.log(2), V, m, beta, L, gamma)[0]
    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > 1 << 60:
            raise ValueError("no admissible delta found")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    j = hi
    while j > 1 and ok(j - 1):        # guard against non-monotone small-j region
        j -= 1
    return j


# ---------------------------------------------------------------- parameters

@dataclass
class GapParams:
    V: float
    beta: float
    m: int
    gamma: float
    log_K: float
    K: Optional[int]
    L: float
    delta_exp: int              # delta = 2^-delta_exp
    d: int
    N: int
    n0: int
    alphabet: int
    h_F: float
    margin: float
    entropy_margin: float       # h(F) - margin - (h(beta) + beta log A)
    delta_lhs: float
    delta_rhs: float
    notes: List[str] = field(default_factory=list)

    @property
    def log_delta(self) -> float:
        """|log delta|."""
        return self.delta_exp * math.log(2)

    @property
    def delta(self):
        with mpmath.workprec(PREC_BITS):
            return mpmath.mpf(2) ** (-self.delta_exp)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["delta"] = f"2^-{self.delta_exp}"
        d["abs_log_delta"] = self.log_delta
        return d


def entropy_F(model: ShiftModel, n_max: int = 16) -> float:
    """Certified lower bound for h(F)."""
    if isinstance(model, FullShift):
        return math.log(model.alphabet)
    return pressure_bracket(model, Potential.zero(model.alphabet), n_max).lower


def F_class(model: ShiftModel, n: int) -> List[Word]:
    """The free-concatenation class F at length n (F = L for full shifts,
    F = G* for the staircase family)."""
    if isinstance(model, FullShift):
        return list(model.language(n).words)
    if isinstance(model, Staircase):
        return model.concat_words(n)
    raise TypeError("an explicit free class F is known only for full shifts and staircases")


def F_count(model: ShiftModel, n: int) -> int:
    if isinstance(model, FullShift):
        return model.alphabet ** n
    if isinstance(model, Staircase):
        counts = [1] + [0] * n
        for k in range(1, n + 1):
            counts[k] = sum(len(model.generator_blocks(j)) * counts[k - j] for j in range(1, k + 1))
        return counts[n]
    raise TypeError("an explicit free class F is known only for full shifts and staircases")


def choose_beta(h_F: float, alphabet: int, margin: float, j_max: int = 60) -> float:
    """Largest dyadic beta with h(beta) + beta log A <= h(F) - margin."""
    for j in range(1, j_max + 1):
        b = 2.0 ** -j
        if binary_entropy(b) + b * math.log(alphabet) <= h_F - margin:
            return b
    raise ValueError("no dyadic beta satisfies the entropy condition")


def derive_params(model: ShiftModel, alpha: float, C: float, g, N: int = 1,
                  n0: Optional[int] = None, beta: Optional[float] = None,
                  m: Optional[int] = None, m_max: int = 4096) -> GapParams:
    """Fix V, beta, m, gamma, K, L, delta in that order."""
    g = parse_sequence(g)
    h_F = entropy_F(model)
    if not h_F > 0:
        raise ValueError("positive entropy of F is required")
    A = model.alphabet
    d = 1
    notes = []
    if n0 is None:
        n0 = 2 * model.n1 if isinstance(model, Staircase) else 1
    V = bowen_V(alpha, C)
    margin = h_F / 10
    if beta is None:
        beta = choose_beta(h_F, A, margin)
    ent_margin = h_F - margin - (binary_entropy(beta) + beta * math.log(A))
    if m is None:
        m = 2 * d
        while m < max(3 * N, n0):
            m += 2 * d
        while N * ball_size(m, int(math.floor(beta * m)), A) >= F_count(model, m):
            m += 2 * d
            if m > m_max:
                raise ValueError("no m passes the counting probe below m_max")
    elif m % (2 * d):
        raise ValueError("m must be a multiple of 2d")
    else:
        notes.append("m supplied by caller")
    gamma = 1.0 / (32 * m * m * V) if V > 0 else 1.0
    if V == 0:
        notes.append("V = 0: gamma set to 1")
    kt = threshold_K(g, gamma)
    L = float(max(2 * m, _g_at_log(g, kt.log_K) if kt.log_K > -math.inf else g(1)))
    j = choose_delta_exponent(V, m, beta, L, gamma)
    ok, lhs, rhs = delta_condition(j * math.log(2), V, m, beta, L, gamma)
    return GapParams(V, beta, m, gamma, kt.log_K, kt.K, L, j, d, N, n0, A, h_F, margin,
                     ent_margin, lhs, rhs, notes)


# ---------------------------------------------------------------- sum-g condition

def sum_g_check(g, gamma: float, L: float, trials: int = 10_000, seed: int = 0,
                max_parts: int = 40, max_log_n: float = 14.0) -> dict:
    """Sample compositions (n_1..n_l) and test sum g(n_i) <= l (L + gamma log(sum/l))."""
    g = parse_sequence(g)
    rng = np.random.default_rng(seed)
    worst, worst_case = 0.0, None
    failures = 0

    def one(parts):
        nonlocal worst, worst_case, failures
        ell = len(parts)
        lhs = sum(g(int(x)) for x in parts)
        rhs = ell * (L + gamma * math.log(sum(parts) / ell))
        ratio = lhs / rhs if rhs > 0 else math.inf
        if ratio > worst:
            worst, worst_case = ratio, list(map(int, parts))
        if lhs > rhs * (1 + 1e-12):
            failures += 1

    one([1] * max_parts)
    for _ in range(trials):
        ell = int(rng.integers(1, max_parts + 1))
        parts = np.exp(rng.uniform(0, max_log_n, size=ell)).astype(np.int64) + 1
        one(parts.tolist())
    return {"passed": failures == 0, "failures": failures, "worst_ratio": worst,
            "worst_case": worst_case, "trials": trials + 1}


# ---------------------------------------------------------------- bound chain

def bound_report(params: GapParams, delta_exp: Optional[int] = None, sup_I: float = 0.0) -> dict:
    """Closed-form bounds h_J, Delta_Phi, h_psi and the final gap expression."""
    j = params.delta_exp if delta_exp is None else delta_exp
    V, m, beta, L, gamma = params.V, params.m, params.beta, params.L, params.gamma
    with mpmath.workprec(PREC_BITS):
        ld = j * mpmath.log(2)
        delta = mpmath.mpf(2) ** (-j)
        span = 2 * L + gamma * ld
        hJ = delta * ld / (4 * m * m)
        dPhi = 2 * delta * V * span
        hpsi = 2 * delta * mpmath.log(span / (beta * m))
        gap = ld / (8 * m * m) - 4 * V * L - 2 * mpmath.log(span / (beta * m))
        net = hJ - dPhi - hpsi
        holds, lhs, rhs = delta_condition(float(ld), V, m, beta, L, gamma)
        return {
            "delta": f"2^-{j}", "abs_log_delta": float(ld),
            "h_J_lower": mpmath.nstr(hJ, 17), "Delta_Phi_upper": mpmath.nstr(dPhi, 17),
            "h_psi_upper": mpmath.nstr(hpsi, 17),
            "net_over_delta": float(net / delta),
            "gap": float(gap), "gap_positive": bool(gap > 0),
            "delta_condition": holds, "delta_lhs": lhs, "delta_rhs": rhs,
            "strict_inequality": bool(net > 0),
            "pressure_lower_bound": mpmath.nstr(sup_I + net, 17),
            "gamma_condition": bool(gamma < 1 / (16 * m * m * V)) if V > 0 else True,
        }


# ---------------------------------------------------------------- psi construction

def enumerate_J(n: int, m: int, k: int) -> List[Tuple[int, ...]]:
    """Compositions of n into k parts, each a positive multiple of 2m."""
    if n % (2 * m):
        raise ValueError("n must be divisible by 2m")
    units = n // (2 * m)
    if not 1 <= k <= units:
        return []
    out = []
    for cuts in itertools.combinations(range(1, units), k - 1):
        edges = (0,) + cuts + (units,)
        out.append(tuple(2 * m * (b - a) for a, b in zip(edges, edges[1:])))
    return out


@dataclass
class PsiRecord:
    w: Word
    parts: Tuple[int, ...]
    starts: Tuple[int, ...]
    psi: Word
    v_blocks: List[Word]
    shifts: List[int]
    s_blocks: List[Word]
    v_distances: List[int]
    viw_ok: bool
    phi_deviation: float
    phi_bound: float
    phi_ok: bool
    markers: List[int]
    R_u: List[int]
    markers_recovered: int
    betam_lhs: float
    betam_mid: int
    betam_rhs: int
    betam_ok: bool
    in_language: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("w", "psi"):
            d[key] = fmt(d[key])
        d["v_blocks"] = [fmt(v) for v in self.v_blocks]
        d["s_blocks"] = [fmt(s) for s in self.s_blocks]
        return d


def marker_set(u: Word, w: Word, m: int, N: int, beta: float) -> List[int]:
    """Positions p (multiples of m) where u[p:p+m] is at distance >= beta m
    from every shifted window w[p-a:p-a+m], 0 <= a < N."""
    out = []
    for p in range(0, len(u) - m + 1, m):
        if all(hamming(u[p:p + m], w[p - a:p - a + m]) >= beta * m
               for a in range(N) if p - a >= 0):
            out.append(p)
    return out


def build_psi(w, parts: Sequence[int], params: GapParams, model: ShiftModel,
              g, potential: Optional[Potential] = None) -> PsiRecord:
    """Splice v^1 s^1 ... v^k s^k: v^i repairs the w-segment into F, s^i is
    Hamming-far from the w-windows just before each block boundary."""
    w = model.check(w)
    g = parse_sequence(g)
    m, N, beta = params.m, params.N, params.beta
    n = len(w)
    parts = tuple(int(x) for x in parts)
    if sum(parts) != n or any(x < 2 * m or x % (2 * m) for x in parts):
        raise ValueError("partition must sum to |w| with parts that are multiples of 2m")
    potential = potential or Potential.indicator(1.0, model.alphabet)
    V = params.V
    starts = tuple(itertools.accumulate((0,) + parts[:-1]))
    v_blocks, s_blocks, shifts, vdist, markers = [], [], [], [], []
    for Ni, ni in zip(starts, parts):
        seg_len = ni - m
        cls = F_class(model, seg_len)
        arr = np.asarray(cls, dtype=np.int8)
        best = None
        for a in range(min(N, Ni + 1)):
            target = np.asarray(w[Ni - a:Ni - a + seg_len], dtype=np.int8)
            dist = (arr != target).sum(axis=1)
            i = int(np.argmin(dist))
            if best is None or dist[i] < best[0]:
                best = (int(dist[i]), a, cls[i])
        dv, a_i, v = best
        p = Ni + ni - m
        targets = [w[p - a:p - a + m] for a in range(N) if p - a >= 0]
        fw = far_word(F_class(model, m), targets, beta, model.alphabet)
        if fw.word is None:
            raise ValueError(f"no far separator at m={m}; increase m")
        v_blocks.append(v)
        shifts.append(a_i)
        vdist.append(dv)
        s_blocks.append(fw.word)
        markers.append(p)
    psi = tuple(itertools.chain.from_iterable(v + s for v, s in zip(v_blocks, s_blocks)))
    k = len(parts)
    viw_ok = all(dv <= g(ni) + m for dv, ni in zip(vdist, parts))
    vals = potential.values
    phi_dev = abs(sum(vals[c] for c in psi) - sum(vals[c] for c in w))
    phi_bound = k * (2 * params.L + params.gamma * math.log(n / k)) * V
    R = marker_set(psi, w, m, N, beta)
    mid = sum(min(hamming(psi[p:p + m], w[p - a:p - a + m]) for a in range(N) if p - a >= 0)
              for p in range(0, n - m + 1, m))
    rhs = sum(g(ni) + 2 * m for ni in parts)
    lhs = beta * m * len(R)
    return PsiRecord(w, parts, starts, psi, v_blocks, shifts, s_blocks, vdist, viw_ok,
                     phi_dev, phi_bound, phi_dev <= phi_bound + 1e-12, markers, R,
                     sum(1 for p in markers if p in R), lhs, mid, rhs,
                     lhs <= mid + 1e-12 and mid <= rhs, model.accepts(psi))
