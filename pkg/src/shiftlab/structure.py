"""Word-combinatorial structure: unique decipherability of codes, the
prefix/core/suffix split for staircase words, free concatenation, and the
bounded-bridge sets F_k of a shift of finite type."""
from __future__ import annotations

import heapq
import itertools
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .models import SFT, LanguageSlice, Staircase, blocks
from .words import Word, fmt, word


@dataclass(frozen=True)
class DecipherVerdict:
    unique: bool
    witness: Optional[Word] = None
    parses: Optional[Tuple[Tuple[Word, ...], Tuple[Word, ...]]] = None
    dangling: Tuple[Word, ...] = ()

    def to_dict(self) -> dict:
        d = {"unique": self.unique, "witness": fmt(self.witness) if self.witness is not None else None,
             "dangling_suffixes": [fmt(s) for s in self.dangling]}
        if self.parses is not None:
            d["parses"] = [[fmt(g) for g in p] for p in self.parses]
        return d


def _dangling_closure(code: Sequence[Word]) -> set:
    """All dangling suffixes reachable from the initial prefix pairs."""
    cset = set(code)
    frontier = {v[len(u):] for u in code for v in code if u != v and v[:len(u)] == u}
    seen = set()
    while frontier:
        seen |= frontier
        nxt = set()
        for d in frontier:
            for c in cset:
                if c != d and c[:len(d)] == d:
                    nxt.add(c[len(d):])
                if c != d and d[:len(c)] == c:
                    nxt.add(d[len(c):])
        frontier = nxt - seen
    return seen


def sardinas_patterson(code: Iterable) -> DecipherVerdict:
    """Decide unique decipherability; on failure return a shortest word with
    two distinct factorizations.

    Search state: the dangling suffix by which one parse leads the other.
    Dijkstra over these states, weighted by growth of the leading parse,
    gives a shortest ambiguous word.
    """
    code = sorted({word(c) for c in code})
    if not code or any(len(c) == 0 for c in code):
        raise ValueError("a code must be a nonempty set of nonempty words")
    dangling = _dangling_closure(code)
    if not (dangling & set(code)):
        return DecipherVerdict(True, None, None, tuple(sorted(dangling)))
    heap = []
    counter = itertools.count()
    for u in code:
        for v in code:
            if u != v and v[:len(u)] == u:
                heapq.heappush(heap, (len(v), next(counter), v[len(u):], (v,), (u,)))
    settled = set()
    while heap:
        cost, _, d, ahead, behind = heapq.heappop(heap)
        if d in settled:
            continue
        settled.add(d)
        for c in code:
            if c == d:
                a, b = ahead, behind + (c,)
                witness = sum(a, ())
                return DecipherVerdict(False, witness, (a, b), tuple(sorted(dangling)))
        for c in code:
            if d[:len(c)] == c and len(c) < len(d):
                heapq.heappush(heap, (cost, next(counter), d[len(c):], ahead, behind + (c,)))
            elif c[:len(d)] == d and len(c) > len(d):
                heapq.heappush(heap, (cost + len(c) - len(d), next(counter), c[len(d):],
                                      behind + (c,), ahead))
    raise AssertionError("dangling suffix reached a codeword but no witness was found")


def count_parses(w: Word, code: Sequence[Word], limit: int = 2) -> int:
    """Number of factorizations of w over the code, saturated at ``limit``."""
    n = len(w)
    ways = [0] * (n + 1)
    ways[0] = 1
    for i in range(1, n + 1):
        total = 0
        for c in code:
            k = len(c)
            if k <= i and ways[i - k] and w[i - k:i] == c:
                total += ways[i - k]
        ways[i] = min(total, limit)
    return ways[n]


def staircase_generators(model: Staircase, max_len: int) -> List[Word]:
    """G truncated to lengths <= max_len."""
    return [g for n in range(1, max_len + 1) for g in model.generator_words(n)]


# ---------------------------------------------------------------- decomposition

@dataclass(frozen=True)
class Decomposition:
    prefix: Word
    core: Tuple[Word, ...]
    suffix: Word
    alternatives: int = 1

    def reassemble(self) -> Word:
        return self.prefix + sum(self.core, ()) + self.suffix

    @property
    def unique(self) -> bool:
        return self.alternatives == 1

    def to_dict(self) -> dict:
        return {"prefix": fmt(self.prefix), "core": [fmt(g) for g in self.core],
                "suffix": fmt(self.suffix), "alternatives": self.alternatives}


def greedy_decode(w, model: Staircase) -> Optional[List[Word]]:
    """Split a G* word into generators: repeatedly take the longest initial
    0^a 1^b with a, b >= 1.  None if w is not in G*."""
    w = word(w)
    out = []
    i = 0
    for a, b in blocks(w):
        if a < 1 or b < 1 or not model.is_generator_block(a, b):
            return None
        out.append(w[i:i + a + b])
        i += a + b
    return out


def _in_P(model: Staircase, u: Word) -> bool:
    bl = blocks(u)
    if not bl:
        return True
    return len(bl) == 1 and bl[0][0] < model.f(len(u))


def _in_S(model: Staircase, u: Word) -> bool:
    bl = blocks(u)
    if not bl:
        return True
    return len(bl) == 1 and bl[0][1] < model.f(len(u))


def staircase_splits(w, model: Staircase) -> List[Tuple[int, int]]:
    """Every (i, j) with w[:i] in P, w[i:j] in G*, w[j:] in S."""
    w = word(w)
    n = len(w)
    bl = blocks(w)
    first = sum(bl[0]) if bl else 0
    last = sum(bl[-1]) if bl else 0
    out = []
    # P and S words are single blocks, so they sit inside the first/last maximal block
    for i in range(0, first + 1):
        if not _in_P(model, w[:i]):
            continue
        for j in range(max(i, n - last), n + 1):
            if _in_S(model, w[j:]) and model.in_concatenation(w[i:j]):
                out.append((i, j))
    return out


def staircase_decompose(w, model: Staircase) -> Decomposition:
    """Split w = u^p v u^s with u^p in P, v in G*, u^s in S.  When several
    splits exist the longest prefix, then longest core, is returned and
    ``alternatives`` records how many there were."""
    w = model.check(w)
    if not model.accepts(w):
        raise ValueError(f"{fmt(w)} is not in the staircase language")
    splits = staircase_splits(w, model)
    if not splits:
        raise ValueError(f"{fmt(w)} has no prefix/core/suffix split")
    i, j = max(splits, key=lambda s: (s[0], s[1]))
    core = greedy_decode(w[i:j], model)
    return Decomposition(w[:i], tuple(core), w[j:], len(splits))


# ---------------------------------------------------------------- free concatenation

@dataclass(frozen=True)
class FreeConcatVerdict:
    free: bool
    witness: Optional[Tuple[Word, Word]] = None
    pairs_checked: int = 0

    def to_dict(self) -> dict:
        return {"free": self.free, "pairs_checked": self.pairs_checked,
                "witness": [fmt(x) for x in self.witness] if self.witness else None}


def free_concat_check(classes: Sequence, contains: Callable[[Word], bool] | None = None
                      ) -> FreeConcatVerdict:
    """Check vw in the class for every sampled pair; ``classes`` is a list of
    slices (or word lists), ``contains`` decides membership of the
    concatenations (default: the union of the given slices)."""
    lists = [list(c.words) if isinstance(c, LanguageSlice) else [word(x) for x in c]
             for c in classes]
    if contains is None:
        pool = {w for ws in lists for w in ws}
        contains = pool.__contains__
    checked = 0
    for vs in lists:
        for ws in lists:
            for v in vs:
                for w in ws:
                    checked += 1
                    if not contains(v + w):
                        return FreeConcatVerdict(False, (v, w), checked)
    return FreeConcatVerdict(True, None, checked)


# ---------------------------------------------------------------- F_k sets

class _FollowerCache:
    def __init__(self):
        self.lock = threading.Lock()
        self.data: Dict[tuple, bool] = {}


_FOLLOWERS_LOCK = threading.Lock()


def local_spec_sets(model, k: int, n: int) -> LanguageSlice:
    """F_k cap L_n: words w such that every v in L can follow w after some
    bridge u with |u| <= k.  For an SFT with memory M it suffices to test
    v of length max(M, 1), and the answer depends only on the state of w."""
    if not isinstance(model, SFT):
        raise TypeError("bridge sets are only computable for shifts of finite type")
    if k < 0:
        raise ValueError("k must be nonnegative")
    with _FOLLOWERS_LOCK:
        cache = model.__dict__.setdefault("_follower_cache", _FollowerCache())
    probes = model.language(max(model.memory, 1)).words
    bridges = [u for j in range(k + 1) for u in itertools.product(range(model.alphabet), repeat=j)]

    def ok(state) -> bool:
        key = (state, k)
        with cache.lock:
            if key in cache.data:
                return cache.data[key]
        verdict = all(any(model.accepts(state + u + v) for u in bridges) for v in probes)
        with cache.lock:
            cache.data[key] = verdict
        return verdict

    out = [w for w in model.language(n).words if ok(model.state_of(w))]
    return LanguageSlice(n, tuple(out))
