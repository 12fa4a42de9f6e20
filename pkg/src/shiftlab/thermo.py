"""Potentials, Birkhoff suprema, partition sums, and certified brackets for
pressure and for the supremum of ergodic averages.

Certification applies to range-1 potentials, where Phi(uv) = Phi(u) + Phi(v)
makes log Lambda_n(L) subadditive and log Lambda_n(G*) superadditive.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .models import (SFT, CapExceeded, CodedModel, DEFAULT_CAP, ShiftModel, Staircase)
from .words import Word, fmt, word

TIE_TOL = 1e-9

HYPERBOLIC = "HYPERBOLIC"
NOT_HYPERBOLIC = "NOT-HYPERBOLIC"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Potential:
    """Locally constant potential: phi(x) = table[x_0 ... x_{k-1}].

    ``holder`` optionally carries (alpha, C) for a Holder envelope; when absent
    the exact constant of the locally constant table is used.
    """
    k: int
    table: Dict[Word, float]
    alphabet: int = 2
    holder: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("potential range must be positive")
        missing = [w for w in itertools.product(range(self.alphabet), repeat=self.k)
                   if w not in self.table]
        if missing:
            raise ValueError(f"potential table missing window {fmt(missing[0])}")
        if self.holder is not None:
            alpha, C = self.holder
            if alpha <= 0 or C < 0:
                raise ValueError("Holder data needs alpha > 0 and C >= 0")

    @classmethod
    def range1(cls, values: Sequence[float], name: str = "") -> "Potential":
        return cls(1, {(c,): float(v) for c, v in enumerate(values)}, len(values), name=name)

    @classmethod
    def indicator(cls, t: float, alphabet: int = 2, symbol: int = 1) -> "Potential":
        """t * phi with phi = -1 on the cylinder of ``symbol``."""
        vals = [0.0] * alphabet
        vals[symbol] = -float(t)
        return cls.range1(vals, name=f"-{t}*1[{symbol}]")

    @classmethod
    def zero(cls, alphabet: int = 2) -> "Potential":
        return cls.range1([0.0] * alphabet, name="0")

    @classmethod
    def from_table(cls, table: Dict[str, float], alphabet: int = 2, holder=None) -> "Potential":
        tab = {word(k): float(v) for k, v in table.items()}
        ks = {len(k) for k in tab}
        if len(ks) != 1:
            raise ValueError("potential windows must share one length")
        return cls(ks.pop(), tab, alphabet, holder)

    @property
    def values(self) -> tuple:
        """Range-1 values indexed by symbol."""
        if self.k != 1:
            raise ValueError("values only defined for range-1 potentials")
        return tuple(float(self.table[(c,)]) for c in range(self.alphabet))

    @property
    def spread(self) -> float:
        v = list(self.table.values())
        return max(v) - min(v)

    def indicator_t(self) -> Optional[float]:
        """t when this is -t * 1[1] on two symbols with t > 0, else None."""
        if self.k == 1 and self.alphabet == 2 and self.table[(0,)] == 0 and self.table[(1,)] < 0:
            return -self.table[(1,)]
        return None

    def exact_holder(self, alpha: float = 1.0) -> float:
        """Smallest C with |phi(x)-phi(y)| <= C d(x,y)^alpha, d = 2^-(first disagreement)."""
        best = 0.0
        for j in range(self.k):
            groups: Dict[Word, List[float]] = {}
            for w, v in self.table.items():
                groups.setdefault(w[:j], []).append(v)
            dev = max(max(g) - min(g) for g in groups.values())
            best = max(best, dev * 2.0 ** (j * alpha))
        return best

    def bowen_constant(self) -> float:
        alpha, C = self.holder if self.holder is not None else (1.0, self.exact_holder(1.0))
        return C / (1 - 2.0 ** (-alpha))

    def window(self, w: Word) -> float:
        return self.table[w]

    def cyclic_sum(self, w: Word) -> float:
        """S_p phi at the periodic point w w w ..."""
        p = len(w)
        ww = w * (self.k // p + 2)
        return sum(self.table[ww[i:i + self.k]] for i in range(p))

    def to_config(self) -> dict:
        cfg = {"k": self.k, "alphabet": self.alphabet,
               "table": {fmt(w): v for w, v in sorted(self.table.items())}}
        if self.holder is not None:
            cfg["holder"] = list(self.holder)
        return cfg


def potential_from_config(cfg) -> Potential:
    if isinstance(cfg, Potential):
        return cfg
    if cfg is None or cfg == "zero" or cfg == 0:
        return Potential.zero()
    if isinstance(cfg, dict):
        if "t" in cfg:
            return Potential.indicator(float(cfg["t"]), int(cfg.get("alphabet", 2)),
                                       int(cfg.get("symbol", 1)))
        if "table" in cfg:
            holder = tuple(cfg["holder"]) if cfg.get("holder") is not None else None
            return Potential.from_table(cfg["table"], int(cfg.get("alphabet", 2)), holder)
        if "values" in cfg:
            return Potential.range1(cfg["values"])
    raise ValueError(f"unrecognised potential config {cfg!r}")


def phi_word(potential: Potential, model: ShiftModel, w) -> float:
    """Phi(w): sup of S_n phi over the cylinder [w] in the model."""
    w = model.check(w)
    n = len(w)
    if n < 1:
        raise ValueError("Phi needs a nonempty word")
    if not model.accepts(w):
        raise ValueError(f"{fmt(w)} is not in the language")
    k = potential.k
    inner = sum(potential.table[w[i:i + k]] for i in range(n - k + 1))
    if k == 1:
        return inner
    best = -math.inf
    for e in itertools.product(range(model.alphabet), repeat=k - 1):
        we = w + e
        if not model.accepts(we):
            continue
        tail = sum(potential.table[we[i:i + k]] for i in range(max(0, n - k + 1), n))
        best = max(best, tail)
    return inner + best


# ---------------------------------------------------------------- partition sums

SELECTORS = ("L", "G", "G*", "P", "S", "D(G)")


@dataclass(frozen=True)
class PartitionSum:
    n: int
    selector: str
    log_value: float
    count: int | None

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value > -math.inf else 0.0


def log_sum_exp(values) -> float:
    """log sum exp(values), max-shifted, exact-rounded summation (fsum)."""
    vals = list(values)
    if not vals:
        return -math.inf
    top = max(vals)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(v - top) for v in vals))


def _range1_dp(model: ShiftModel, vals: Sequence[float], n: int, mode: str) -> float:
    """log sum (mode='sum') or max (mode='max') of S_n phi over L_n by a
    DP on automaton states."""
    table = {model.initial_state(): 0.0}
    for _ in range(n):
        nxt: Dict = {}
        for st, v in table.items():
            for c in range(model.alphabet):
                t = model.step(st, c)
                if t is None:
                    continue
                x = v + vals[c]
                nxt.setdefault(t, []).append(x)
        if mode == "sum":
            table = {s: log_sum_exp(xs) for s, xs in nxt.items()}
        else:
            table = {s: max(xs) for s, xs in nxt.items()}
    if not table:
        return -math.inf
    return log_sum_exp(table.values()) if mode == "sum" else max(table.values())


def _class_words(model: ShiftModel, selector: str, n: int, cap: int) -> List[Word]:
    if selector == "L":
        sl = model.language(n, cap)
        if not sl.complete:
            raise CapExceeded(f"L_{n} exceeds cap {cap}")
        return list(sl.words)
    if not isinstance(model, CodedModel):
        raise ValueError(f"selector {selector} needs a coded model")
    if selector == "G":
        return model.generator_words(n)
    if selector == "G*":
        return model.concat_words(n, cap)
    if selector == "D(G)":
        return model.dg_words(n)
    if not isinstance(model, Staircase):
        raise ValueError(f"selector {selector} is defined for the staircase family only")
    return model.prefix_words(n) if selector == "P" else model.suffix_words(n)


def partition_sum(model: ShiftModel, potential: Potential, selector: str, n: int,
                  cap: int = DEFAULT_CAP) -> PartitionSum:
    """Lambda_n(D, phi) for D chosen by ``selector``; returned in log form."""
    if selector not in SELECTORS:
        raise ValueError(f"selector must be one of {SELECTORS}")
    if n < 0:
        raise ValueError("length must be nonnegative")
    if n == 0:
        return PartitionSum(0, selector, 0.0, 1)
    if potential.k == 1 and selector == "L":
        return PartitionSum(n, selector, _range1_dp(model, potential.values, n, "sum"), None)
    if potential.k == 1 and selector == "G*" and isinstance(model, CodedModel) \
            and model.uniquely_decipherable:
        return PartitionSum(n, selector, log_gstar_sums(model, potential, n)[n], None)
    words = _class_words(model, selector, n, cap)
    if potential.k == 1:
        vals = potential.values
        phis = [float(sum(vals[c] for c in w)) for w in words]
    else:
        phis = [phi_word(potential, model, w) for w in words]
    return PartitionSum(n, selector, log_sum_exp(phis), len(words))


def log_generator_sums(model: CodedModel, potential: Potential, n_max: int) -> List[float]:
    """log Lambda_j(G, phi) for j = 0..n_max (range-1 potentials)."""
    vals = potential.values
    out = [-math.inf]
    for j in range(1, n_max + 1):
        if isinstance(model, Staircase):
            phis = [a * vals[0] + b * vals[1] for a, b in model.generator_blocks(j)]
        else:
            phis = [float(sum(vals[c] for c in g)) for g in model.generator_words(j)]
        out.append(log_sum_exp(phis))
    return out


def log_gstar_sums(model: CodedModel, potential: Potential, n_max: int) -> List[float]:
    """log Lambda_n(G*, phi), n = 0..n_max, via the renewal convolution
    (exact when G is uniquely decipherable)."""
    lg = log_generator_sums(model, potential, n_max)
    out = [0.0]
    for n in range(1, n_max + 1):
        out.append(log_sum_exp(lg[j] + out[n - j] for j in range(1, n + 1)
                               if lg[j] > -math.inf))
    return out


# ---------------------------------------------------------------- brackets

@dataclass
class PressureBracket:
    n: int
    lower: float
    upper: float
    lower_certified: bool
    upper_certified: bool
    lower_method: str = "none"
    upper_method: str = "subadditive"
    rows: List[dict] = field(default_factory=list)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self) -> dict:
        return {"n": self.n, "lower": self.lower, "upper": self.upper,
                "lower_certified": self.lower_certified, "upper_certified": self.upper_certified,
                "lower_method": self.lower_method, "upper_method": self.upper_method}


@dataclass
class ErgodicBracket:
    lower: float
    upper: float
    lower_method: str
    upper_method: str
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "lower_method": self.lower_method,
                "upper_method": self.upper_method, "witness": self.witness}


def _weighted_graph(model: SFT, potential: Potential):
    order = max(model.memory, potential.k - 1)
    states, edges = model.graph(order)
    index = {s: i for i, s in enumerate(states)}
    k = potential.k
    arcs = []
    for s in states:
        for c, t in edges[s]:
            arcs.append((index[s], index[t], potential.table[(s + (c,))[len(s) + 1 - k:]]))
    return len(states), arcs


def _sft_cycle_lower(model: SFT, potential: Potential, n_max: int) -> float:
    """max over p <= n_max of (1/p) log max_s (M^p)_{ss}: periodic paths give
    Lambda_{jp} >= ((M^p)_{ss})^j, so each term is a pressure lower bound."""
    size, arcs = _weighted_graph(model, potential)
    if size == 0:
        return -math.inf
    M = np.zeros((size, size))
    top = max(w for _, _, w in arcs)
    for i, j, w in arcs:
        M[i, j] += math.exp(w - top)
    P = np.eye(size)
    log_scale = 0.0
    best = -math.inf
    for p in range(1, n_max + 1):
        P = P @ M
        s = float(P.max())
        if s <= 0:
            break
        P /= s
        log_scale += math.log(s)
        d = float(np.diag(P).max())
        if d > 0:
            best = max(best, (math.log(d) + log_scale) / p + top)
    return best


def max_mean_cycle(size: int, arcs) -> tuple:
    """Karp's algorithm: (maximum cycle mean, a vertex cycle attaining it)."""
    if size == 0 or not arcs:
        return -math.inf, []
    NEG = -math.inf
    D = np.full((size + 1, size), NEG)
    parent = np.full((size + 1, size), -1, dtype=np.int64)
    D[0, :] = 0.0
    for k in range(1, size + 1):
        for i, j, w in arcs:
            if D[k - 1, i] > NEG and D[k - 1, i] + w > D[k, j]:
                D[k, j] = D[k - 1, i] + w
                parent[k, j] = i
    best, arg = NEG, -1
    for v in range(size):
        if D[size, v] == NEG:
            continue
        worst = math.inf
        for k in range(size):
            if D[k, v] > NEG:
                worst = min(worst, float(D[size, v] - D[k, v]) / (size - k))
        if worst > best:
            best, arg = worst, v
    # walk back along the optimal length-size path to extract a cycle
    path = [arg]
    v = arg
    for k in range(size, 0, -1):
        v = int(parent[k, v])
        path.append(v)
    path.reverse()
    seen = {}
    cycle = []
    for idx, v in enumerate(path):
        if v in seen:
            cycle = path[seen[v]:idx + 1]
            break
        seen[v] = idx
    return best, cycle


def sup_ergodic_bracket(model: ShiftModel, potential: Potential, n_max: int,
                        cap: int = DEFAULT_CAP, p_max: int = 10) -> ErgodicBracket:
    """Bracket for sup of the integrals of phi over invariant measures."""
    upper = math.inf
    for n in range(1, n_max + 1):
        if potential.k == 1:
            m = _range1_dp(model, potential.values, n, "max")
        else:
            sl = model.language(n, cap)
            if not sl.complete:
                break
            m = max(phi_word(potential, model, w) for w in sl.words)
        upper = min(upper, m / n)
    if isinstance(model, SFT):
        size, arcs = _weighted_graph(model, potential)
        lower, cycle = max_mean_cycle(size, arcs)
        return ErgodicBracket(lower, upper, "karp", "max-Phi/n", None)
    lower, witness = -math.inf, None
    for p in range(1, min(p_max, n_max) + 1):
        sl = model.language(p, cap)
        for w in sl.words:
            avg = potential.cyclic_sum(w) / p
            if avg > lower and model.periodic_ok(w):
                lower, witness = avg, fmt(w)
    return ErgodicBracket(lower, upper, "periodic-word", "max-Phi/n", witness)


def pressure_bracket(model: ShiftModel, potential: Potential, n_max: int,
                     cap: int = DEFAULT_CAP, n_lower: int | None = None) -> PressureBracket:
    """Upper: min_n (1/n) log Lambda_n(L).  Lower: G* growth (coded), periodic
    paths (SFT), or the best periodic orbit average (any model)."""
    rows = []
    upper = math.inf
    for n in range(1, n_max + 1):
        ps = partition_sum(model, potential, "L", n, cap)
        up_n = ps.log_value / n
        upper = min(upper, up_n)
        rows.append({"n": n, "logLambda": ps.log_value, "upper": upper})
    certified = potential.k == 1
    lower, method = -math.inf, "none"
    if isinstance(model, SFT):
        lower, method = _sft_cycle_lower(model, potential, n_max), "periodic-paths"
    elif isinstance(model, CodedModel) and potential.k == 1:
        if model.uniquely_decipherable:
            nl = n_lower if n_lower is not None else max(n_max, 512)
            ls = log_gstar_sums(model, potential, nl)
        else:
            nl = n_max
            ls = [0.0] + [partition_sum(model, potential, "G*", n, cap).log_value
                          for n in range(1, nl + 1)]
        cands = [(ls[n] / n, n) for n in range(1, nl + 1) if ls[n] > -math.inf]
        if cands:
            lower = max(cands)[0]
            method = "G*-superadditive"
        for r in rows:
            n = r["n"]
            r["lower_Gstar"] = ls[n] / n if n < len(ls) and ls[n] > -math.inf else None
    erg = sup_ergodic_bracket(model, potential, min(n_max, 12), cap)
    if erg.lower > lower:
        lower, method = erg.lower, "periodic-orbit"
    return PressureBracket(n_max, lower, upper, lower > -math.inf, certified, method,
                           "subadditive" if certified else "heuristic", rows)


@dataclass
class HyperbolicityVerdict:
    verdict: str
    pressure: PressureBracket
    ergodic: ErgodicBracket
    margin: float
    series: Optional[dict] = None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "margin": self.margin,
                "pressure": self.pressure.to_dict(), "ergodic": self.ergodic.to_dict(),
                "series": self.series}


def hyperbolicity_check(model: ShiftModel, potential: Potential, n_max: int,
                        tol: float = TIE_TOL, cap: int = DEFAULT_CAP) -> HyperbolicityVerdict:
    """Compare the pressure bracket with the sup-I bracket.

    For the staircase family with phi = -t 1[1] the generating-series
    certificate is folded in: P = 0 when F(1) <= 1, else P = -log x*.
    """
    pb = pressure_bracket(model, potential, n_max, cap)
    eb = sup_ergodic_bracket(model, potential, n_max, cap)
    series = None
    t = potential.indicator_t()
    if isinstance(model, Staircase) and t is not None:
        from .coded import SeriesUncertified, pressure_from_series
        try:
            res = pressure_from_series(model.f, t, tol=1e-12)
            series = res.to_dict()
            if res.zero:
                pb.upper, pb.upper_method = min(pb.upper, 0.0), "series F(1)<=1"
                pb.lower, pb.lower_method = max(pb.lower, 0.0), "P>=0"
            else:
                if res.lower > pb.lower:
                    pb.lower, pb.lower_method = res.lower, "series root"
                if res.upper < pb.upper:
                    pb.upper, pb.upper_method = res.upper, "series root"
            pb.lower_certified = pb.upper_certified = True
        except SeriesUncertified as exc:
            series = {"error": str(exc)}
    if pb.lower_certified and pb.lower > eb.upper + tol:
        verdict = HYPERBOLIC
        margin = pb.lower - eb.upper
    elif pb.upper_certified and pb.upper <= eb.lower + tol:
        verdict = NOT_HYPERBOLIC
        margin = pb.upper - eb.lower
    else:
        verdict = INCONCLUSIVE
        margin = pb.lower - eb.upper
    return HyperbolicityVerdict(verdict, pb, eb, margin, series)
