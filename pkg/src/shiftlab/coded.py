"""Generating series for the staircase family with phi = -t 1[1].

F(x) = sum_n Lambda_n(G) x^n, H = sum_n Lambda_n(G*) x^n, and the boundary
series C^P, C^S built from the prefix/suffix classes.  P(t phi) > 0 exactly
when F(1) > 1, in which case P = -log x* for the root of F(x*) = 1.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .sequences import IntSequence, parse_sequence

CERT_MARGIN = 1e-12
N_START = 64
N_LIMIT = 1 << 44
ARRAY_LIMIT = 1 << 16
RUN_LIMIT = 200_000

_F_CACHE: Dict[object, np.ndarray] = {}


def _f_values(f: IntSequence, N: int) -> np.ndarray:
    """f(1..N) as int64, cached per sequence."""
    key = repr(f.to_config()) if f.spec is not None else ("fn", id(f.func))
    arr = _F_CACHE.get(key)
    if arr is None or len(arr) < N:
        size = max(N, 2 * len(arr) if arr is not None else N)
        arr = f.values(size)
        _F_CACHE[key] = arr
    return arr[:N]


def lambda_G_closed(f, n: int, t: float) -> float:
    """Lambda_n(G, t phi) = sum of e^{-tb} over generators 0^a 1^b of length n."""
    f = parse_sequence(f)
    if n < 1:
        return 0.0
    fn = f(n)
    m = n - 2 * fn + 1          # number of generators of length n
    if m <= 0:
        return 0.0
    if t == 0:
        return float(m)
    return math.exp(-t * fn) * math.expm1(-t * m) / math.expm1(-t)


def _lambda_array(f: IntSequence, t: float, N: int) -> np.ndarray:
    n = np.arange(1, N + 1, dtype=np.float64)
    fv = _f_values(f, N).astype(np.float64)
    m = n - 2 * fv + 1
    out = np.zeros(N)
    ok = m > 0
    if t == 0:
        out[ok] = m[ok]
    else:
        out[ok] = np.exp(-t * fv[ok]) * np.expm1(-t * m[ok]) / math.expm1(-t)
    return out


def _boundary_arrays(f: IntSequence, t: float, N: int):
    """Coefficients of C^P and C^S for n = 1..N."""
    n = np.arange(1, N + 1, dtype=np.float64)
    fv = _f_values(f, N).astype(np.float64)
    m = np.minimum(n + 1, np.maximum(fv, 0))      # number of words in P_n (= S_n)
    if t == 0:
        return m.copy(), m.copy()
    cs = np.expm1(-t * m) / math.expm1(-t)
    cp = (np.exp(-t * (n - m)) - np.exp(-t * n)) / math.expm1(t)
    return cp, cs


def _powers(x: float, N: int) -> np.ndarray:
    if x == 0:
        return np.zeros(N)
    return np.exp(np.arange(1, N + 1) * math.log(x))


def series_tail(f, t: float, x: float, N: int) -> float:
    """Upper bound on sum_{n>N} Lambda_n(G, t phi) x^n (may be inf)."""
    f = parse_sequence(f)
    if x == 0:
        return 0.0
    xN = x ** (N + 1)
    best = math.inf
    # Lambda_n <= e^t/(e^t-1) * (e^-t)^f(n)
    g_tail = f.tail_sum(math.exp(-t), N)
    if g_tail < math.inf:
        best = min(best, -1.0 / math.expm1(-t) * xN * g_tail)
    if x < 1:
        # Lambda_n <= sum_{b>=0} e^{-tb}, and Lambda_n <= n + 1 (word count)
        best = min(best, xN / ((1 - x) * -math.expm1(-t)))
        best = min(best, xN * ((N + 2) - (N + 1) * x) / (1 - x) ** 2)
    return best


@dataclass
class SeriesState:
    t: float
    x: float
    N: int
    F_N: float
    H_N: float
    CP_N: float
    CS_N: float
    tail_F: float
    residual: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def series_coefficients(f, t: float, N: int) -> Dict[str, np.ndarray]:
    """Coefficients n = 0..N of F, H, C^P, C^S at x = 1."""
    f = parse_sequence(f)
    lam = np.concatenate([[0.0], _lambda_array(f, t, N)])
    h = np.zeros(N + 1)
    h[0] = 1.0
    for n in range(1, N + 1):
        h[n] = float(np.dot(lam[1:n + 1], h[n - 1::-1]))
    cp, cs = _boundary_arrays(f, t, N)
    return {"F": lam, "H": h, "CP": np.concatenate([[1.0], cp]),
            "CS": np.concatenate([[1.0], cs])}


def series_eval(f, t: float, x: float, N: int) -> SeriesState:
    """Partial sums to N terms of F, H, C^P, C^S at x, with a tail bound on F."""
    f = parse_sequence(f)
    if not 0 <= x <= 1:
        raise ValueError("series evaluated only for 0 <= x <= 1")
    if t <= 0:
        raise ValueError("series route needs t > 0")
    lam = _lambda_array(f, t, N)
    xn = _powers(x, N)
    c = lam * xn
    F = math.fsum(c.tolist())
    # H via the renewal convolution on x-weighted coefficients
    h = np.zeros(N + 1)
    h[0] = 1.0
    for n in range(1, N + 1):
        h[n] = float(np.dot(c[:n], h[n - 1::-1]))
    H = math.fsum(h.tolist())
    cp, cs = _boundary_arrays(f, t, N)
    CP = 1.0 + math.fsum((cp * xn).tolist())
    CS = 1.0 + math.fsum((cs * xn).tolist())
    residual = abs(H - 1.0 / (1.0 - F)) if F < 1 else None
    return SeriesState(t, x, N, F, H, CP, CS, series_tail(f, t, x, N), residual)


def _run_end(f: IntSequence, start: int, N: int) -> int:
    """Last n <= N with f(n) == f(start) (f nondecreasing): gallop then bisect."""
    v = f(start)
    step = 1
    lo = start
    while lo + step <= N and f(lo + step) == v:
        lo += step
        step *= 2
    hi = min(lo + step, N + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) == v:
            lo = mid
        else:
            hi = mid
    return lo


def _F1_runs(f: IntSequence, t: float, N: int) -> float:
    """sum_{n<=N} Lambda_n at x = 1, one closed form per run of constant f."""
    q = -math.expm1(-t)               # 1 - e^-t
    parts = []
    n, runs = 1, 0
    while n <= N:
        end = _run_end(f, n, N)
        v = f(n)
        a = max(n, 2 * v)             # below 2v there are no generators
        if a <= end:
            cnt = end - a + 1
            geo = math.exp(-t * (a - 2 * v + 1)) * -math.expm1(-t * cnt) / q
            parts.append(math.exp(-t * v) / q * (cnt - geo))
        n = end + 1
        runs += 1
        if runs > RUN_LIMIT:
            raise OverflowError("too many runs of f below N")
    return math.fsum(parts)


def F_partial(f, t: float, x: float, N: int) -> float:
    f = parse_sequence(f)
    if x == 1 and N > ARRAY_LIMIT:
        return _F1_runs(f, t, N)
    return math.fsum((_lambda_array(f, t, N) * _powers(x, N)).tolist())


class SeriesUncertified(RuntimeError):
    """The tail could not be controlled; ``bracket`` holds what is known."""

    def __init__(self, message: str, bracket: Tuple[float, float]):
        super().__init__(message)
        self.bracket = bracket


@dataclass
class SeriesPressure:
    t: float
    value: float
    lower: float
    upper: float
    zero: bool
    x_lo: float
    x_hi: float
    N: int
    F1: float
    tail1: float
    converged: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def pressure_from_series(f, t: float, tol: float = 1e-10, N0: int = N_START,
                         N_max: int = N_LIMIT) -> SeriesPressure:
    """P(t phi) for the staircase shift from the root of F(x) = 1 (or 0)."""
    f = parse_sequence(f)
    if t <= 0:
        raise ValueError("series route needs t > 0")
    N = N0
    while True:
        try:
            F1 = F_partial(f, t, 1.0, N)
        except OverflowError:
            raise SeriesUncertified(f"F(1) undecided at N={N}: too many runs of f",
                                    (0.0, math.inf)) from None
        T1 = series_tail(f, t, 1.0, N)
        if F1 + T1 <= 1 - CERT_MARGIN:
            return SeriesPressure(t, 0.0, 0.0, 0.0, True, 1.0, 1.0, N, F1, T1)
        if F1 > 1 + CERT_MARGIN:
            break
        if N >= N_max:
            raise SeriesUncertified(f"F(1) undecided at N={N} (partial {F1}, tail {T1})",
                                    (0.0, math.inf))
        N *= 2
    lo, hi = 0.0, 1.0
    converged = True
    while hi - lo > 0 and (lo == 0 or math.log(hi / lo) > tol):
        mid = 0.5 * (lo + hi) if lo == 0 or hi / lo > 2 else math.sqrt(lo * hi)
        while True:
            Fm = F_partial(f, t, mid, N)
            if Fm > 1 + CERT_MARGIN:
                hi = mid
                break
            Tm = series_tail(f, t, mid, N)
            if Fm + Tm < 1 - CERT_MARGIN:
                lo = mid
                break
            if N >= min(N_max, ARRAY_LIMIT) or Tm < CERT_MARGIN:
                converged = False
                break
            N *= 2
        if not converged:
            break
    upper = -math.log(lo) if lo > 0 else math.inf
    lower = -math.log(hi)
    value = -math.log(math.sqrt(lo * hi)) if lo > 0 else lower
    return SeriesPressure(t, value, lower, upper, False, lo, hi, N, F1,
                          series_tail(f, t, 1.0, N), converged)


def summability_check(f, gamma: float, N: int = 1000) -> dict:
    """Partial sum and certified tail of sum_n gamma^f(n)."""
    f = parse_sequence(f)
    fv = _f_values(f, N).astype(np.float64)
    partial = math.fsum(np.power(gamma, fv).tolist())
    tail = f.tail_sum(gamma, N)
    return {"gamma": gamma, "N": N, "partial": partial, "tail": tail,
            "certified": tail < math.inf}


@dataclass
class RootBracket:
    kind: str                       # "finite", "infinite" or "unknown"
    t_lo: Optional[float] = None
    t_hi: Optional[float] = None
    converged: bool = False
    evidence: dict = field(default_factory=dict)

    @property
    def width(self) -> float:
        if self.kind != "finite":
            return math.inf
        return self.t_hi - self.t_lo

    def to_dict(self) -> dict:
        d = asdict(self)
        d["width"] = self.width if self.kind == "finite" else None
        return d


def _classify(f: IntSequence, t: float, N: int, N_max: int):
    """'below' if F(1;t) > 1 (t < t0), 'above' if F(1;t) + tail <= 1 (t >= t0)."""
    while True:
        try:
            F1 = F_partial(f, t, 1.0, N)
        except OverflowError:
            return None, N, {"t": t, "N": N, "reason": "run limit"}
        if F1 > 1 + CERT_MARGIN:
            return "below", N, {"t": t, "N": N, "F_N": F1}
        T = series_tail(f, t, 1.0, N)
        if F1 + T <= 1 - CERT_MARGIN:
            return "above", N, {"t": t, "N": N, "F_N": F1, "tail": T}
        if N >= N_max or T < CERT_MARGIN:
            return None, N, {"t": t, "N": N, "F_N": F1, "tail": T}
        N *= 2


def bowen_root(f, gamma_witness: float | None = None, tol: float = 1e-3,
               t_range: Tuple[float, float] = (1e-3, 64.0), N0: int = N_START,
               N_max: int = N_LIMIT) -> RootBracket:
    """Certified bracket for the first zero t0 of t -> P(t phi)."""
    f = parse_sequence(f)
    if f.eventually_constant:
        c = f.bound
        scan = {str(g): g ** c * 10_000 for g in (0.1, 0.5, 0.9)}
        return RootBracket("infinite", evidence={
            "reason": f"f is eventually constant ({c}); sum gamma^f(n) diverges for every gamma",
            "partial_sums_n_le_10000": scan})
    gamma = gamma_witness if gamma_witness is not None else f.witness
    if gamma is None:
        return RootBracket("unknown", evidence={"reason": "no summability witness"})
    summ = summability_check(f, gamma)
    if not summ["certified"]:
        return RootBracket("unknown", evidence={"reason": "witness tail not certified",
                                                "summability": summ})
    lo, hi = t_range
    N = N0
    s_lo, N, ev_lo = _classify(f, lo, N, N_max)
    s_hi, N, ev_hi = _classify(f, hi, N, N_max)
    if s_lo != "below" or s_hi != "above":
        return RootBracket("unknown", evidence={"reason": "no certificate at the range ends",
                                                "lo": ev_lo, "hi": ev_hi, "summability": summ})
    converged = True
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        side, N, ev = _classify(f, mid, N, N_max)
        if side == "below":
            lo, ev_lo = mid, ev
        elif side == "above":
            hi, ev_hi = mid, ev
        else:
            converged = False
            break
    return RootBracket("finite", lo, hi, converged,
                       {"t_lo": ev_lo, "t_hi": ev_hi, "summability": summ})
