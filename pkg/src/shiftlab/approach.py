"""Hamming approachability: nearest words, the staircase repair into G*, and
Hamming-far words."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .models import DEFAULT_CAP, CapExceeded, LanguageSlice, ShiftModel, Staircase, blocks
from .words import Word, as_array, ball_size, fmt, hamming, word


def _class_array(cls) -> Tuple[List[Word], np.ndarray]:
    if isinstance(cls, LanguageSlice):
        words = list(cls.words)
        return words, cls.array
    words = sorted({word(w) for w in cls})
    n = len(words[0]) if words else 0
    return words, as_array(words, n)


def nearest_in_class(w, cls) -> Tuple[Word, int]:
    """Closest class member to w; ties go to the lexicographically smallest."""
    w = word(w)
    words, arr = _class_array(cls)
    if not words:
        raise ValueError("class is empty")
    if arr.shape[1] != len(w):
        raise ValueError(f"class words have length {arr.shape[1]}, target has {len(w)}")
    d = (arr != np.asarray(w, dtype=np.int8)).sum(axis=1)
    i = int(np.argmin(d))          # first minimum = lexicographically smallest (sorted class)
    return words[i], int(d[i])


def distances_to_class(words: Sequence[Word], cls, chunk: int = 4096) -> np.ndarray:
    """Minimum Hamming distance from each word to the class."""
    _, arr = _class_array(cls)
    if arr.shape[0] == 0:
        raise ValueError("class is empty")
    src = as_array(list(words), arr.shape[1])
    out = np.empty(len(src), dtype=np.int64)
    for s in range(0, len(src), chunk):
        block = src[s:s + chunk]
        d = (block[:, None, :] != arr[None, :, :]).sum(axis=2)
        out[s:s + chunk] = d.min(axis=1)
    return out


# ---------------------------------------------------------------- staircase repair

@dataclass(frozen=True)
class RepairResult:
    input: Word
    repaired: Word
    distance: int
    budget: int
    within_budget: bool
    cases: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"input": fmt(self.input), "repaired": fmt(self.repaired),
                "distance": self.distance, "budget": self.budget,
                "within_budget": self.within_budget, "cases": list(self.cases)}


def repair_budget(model: Staircase, n: int) -> int:
    return 2 * model.n1 + 2 * max(model.f(n), model.n1)


def _single_block_repair(model: Staircase, n: int, a: int) -> Tuple[Word, str]:
    """Replace a word u 0^a 1^b v of length n (|u|, |v| <= n1) by a generator."""
    fn, n1 = model.f(n), model.n1
    if n1 + a < fn:
        return (0,) * fn + (1,) * (n - fn), "low"
    if n1 + a > n - fn:
        return (0,) * (n - fn) + (1,) * fn, "high"
    return (0,) * (n1 + a) + (1,) * (n - n1 - a), "middle"


def staircase_repair(w, model: Staircase) -> RepairResult:
    """Move a staircase word into G* by rewriting its two boundary pieces."""
    w = model.check(w)
    n, n1 = len(w), model.n1
    if n < 2 * n1:
        raise ValueError(f"repair needs |w| >= 2 n1 = {2 * n1}")
    if not model.accepts(w):
        raise ValueError(f"{fmt(w)} is not in the staircase language")
    budget = repair_budget(model, n)
    if model.in_concatenation(w):
        return RepairResult(w, w, 0, budget, True, ("identity",))
    bl = blocks(w)
    ends = []
    pos = 0
    for a, b in bl:
        pos += a + b
        ends.append(pos)
    # blocks holding positions n1 and n - n1 (1-based)
    j = next(i for i, e in enumerate(ends) if e >= n1)
    k = next(i for i, e in enumerate(ends) if e >= n - n1)
    if j == k:
        rep, case = _single_block_repair(model, n, bl[j][0])
        cases = ("single:" + case,)
    else:
        lj, lk1 = ends[j], ends[k - 1]
        wp, wc, ws = w[:lj], w[lj:lk1], w[lk1:]
        rp, cp = _single_block_repair(model, len(wp), bl[j][0])
        rs, cs = _single_block_repair(model, len(ws), bl[k][0])
        rep = rp + wc + rs
        cases = ("prefix:" + cp, "suffix:" + cs)
    d = hamming(w, rep)
    return RepairResult(w, rep, d, budget, d <= budget, cases)


# ---------------------------------------------------------------- far words

@dataclass(frozen=True)
class FarWordResult:
    word: Optional[Word]
    radius: int
    covered_bound: int
    class_size: int

    @property
    def found(self) -> bool:
        return self.word is not None

    @property
    def counting_certificate(self) -> bool:
        """True when the ball-count bound alone guarantees existence."""
        return self.covered_bound < self.class_size

    def to_dict(self) -> dict:
        return {"word": fmt(self.word) if self.word is not None else "NOT-FOUND",
                "radius": self.radius, "covered_bound": self.covered_bound,
                "class_size": self.class_size}


def far_word(cls, targets: Sequence, beta: float, alphabet: int = 2) -> FarWordResult:
    """First class word (lexicographic) at distance > beta*m from all targets."""
    words, arr = _class_array(cls)
    targets = [word(t) for t in targets]
    m = arr.shape[1] if words else (len(targets[0]) if targets else 0)
    if any(len(t) != m for t in targets):
        raise ValueError("targets must have the class length")
    radius = int(np.floor(beta * m + 1e-12))
    bound = len(targets) * ball_size(m, radius, alphabet)
    if not words:
        return FarWordResult(None, radius, bound, 0)
    ok = np.ones(len(words), dtype=bool)
    for t in targets:
        d = (arr != np.asarray(t, dtype=np.int8)).sum(axis=1)
        ok &= d > beta * m
    idx = np.flatnonzero(ok)
    found = words[int(idx[0])] if len(idx) else None
    return FarWordResult(found, radius, bound, len(words))


# ---------------------------------------------------------------- reports

@dataclass
class ApproachRow:
    n: int
    worst_distance: Optional[int]
    budget: int
    passed: Optional[bool]
    witness: Optional[str]
    status: str = "ok"

    def to_dict(self) -> dict:
        return {"n": self.n, "worst_distance": self.worst_distance, "budget": self.budget,
                "pass": self.passed, "witness": self.witness, "status": self.status}


def class_slice(model: ShiftModel, selector: str, n: int, cap: int = DEFAULT_CAP) -> List[Word]:
    if selector == "L":
        sl = model.language(n, cap)
        if not sl.complete:
            raise CapExceeded(f"L_{n} exceeds cap {cap}")
        return list(sl.words)
    if selector == "G":
        return model.generator_words(n)
    if selector == "G*":
        return model.concat_words(n, cap)
    raise ValueError(f"unknown class selector {selector!r}")


def approachability_report(model: ShiftModel, selector: str, g: Callable[[int], int],
                           n_range: Sequence[int], cap: int = DEFAULT_CAP,
                           n_min: int = 0) -> List[ApproachRow]:
    """Worst nearest-class distance over L_n against the budget g(n)."""
    rows = []
    for n in n_range:
        budget = int(g(n))
        if n < n_min:
            rows.append(ApproachRow(n, None, budget, None, None, "out-of-scope"))
            continue
        try:
            lang = class_slice(model, "L", n, cap)
            cls = class_slice(model, selector, n, cap)
        except CapExceeded:
            rows.append(ApproachRow(n, None, budget, None, None, "cap-exceeded"))
            continue
        if not cls:
            rows.append(ApproachRow(n, None, budget, False, None, "empty-class"))
            continue
        d = distances_to_class(lang, sorted(cls))
        i = int(np.argmax(d))
        worst = int(d[i])
        rows.append(ApproachRow(n, worst, budget, worst <= budget, fmt(lang[i])))
    return rows
