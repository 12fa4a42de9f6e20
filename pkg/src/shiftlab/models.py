"""Concrete one-sided shift spaces as membership oracles with exact language
enumeration, plus sliding block codes.

Every model implements ``accepts(w)`` (is ``w`` in the language?) and inherits
prefix-tree enumeration from :class:`ShiftModel`.  The coded families
(staircase, S-gap, finite generator lists) additionally expose their
generating set and its free concatenations.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .sequences import (GapSet, IntSequence, check_staircase_function, parse_gap_set,
                        parse_sequence, staircase_threshold)
from .words import Word, as_array, check_word, fmt, word

DEFAULT_CAP = 2_000_000


class CapExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured word cap."""


class PrecisionError(ValueError):
    """Raised when a beta expansion is too short for the requested word."""


@dataclass(frozen=True)
class LanguageSlice:
    """Words of one length, sorted; ``complete`` is False for capped slices."""
    n: int
    words: Tuple[Word, ...]
    complete: bool = True

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in self.word_set

    @cached_property
    def word_set(self) -> frozenset:
        return frozenset(self.words)

    @cached_property
    def array(self) -> np.ndarray:
        """Words as a ``(count, n)`` int8 array."""
        return as_array(self.words, self.n)


def make_slice(n: int, words: Iterable[Word], complete: bool = True) -> LanguageSlice:
    return LanguageSlice(n, tuple(sorted(set(words))), complete)


class ShiftModel:
    """Base class: a factor-closed language over ``{0..alphabet-1}``."""

    family = "abstract"

    def __init__(self, alphabet: int):
        if alphabet < 1:
            raise ValueError("alphabet size must be positive")
        self.alphabet = alphabet
        self._slices: Dict[int, tuple] = {}
        self._lock = threading.Lock()

    def accepts(self, w) -> bool:
        raise NotImplementedError

    # Right-extension automaton.  ``step`` returns the state of ``w + (c,)``
    # or None when that word leaves the language; the state must determine
    # every future extension.  The default state is the word itself.
    def initial_state(self):
        return ()

    def step(self, state, c: int):
        t = state + (c,)
        return t if self.accepts(t) else None

    def extends(self, w: Word, c: int) -> bool:
        """Is ``w + (c,)`` in the language, given that ``w`` is?"""
        return self.accepts(w + (c,))

    def state_of(self, w):
        """Automaton state reached by ``w``; None if ``w`` is not in the language."""
        st = self.initial_state()
        for c in word(w):
            st = self.step(st, c)
            if st is None:
                return None
        return st

    def periodic_ok(self, w, repeats: int = 64):
        """Is the periodic point w w w ... in X?  True/False when the automaton
        state repeats or dies within ``repeats`` copies, else None (unknown)."""
        w = self.check(w)
        if not w:
            raise ValueError("periodic word must be nonempty")
        st = self.initial_state()
        seen = {st}
        for _ in range(repeats):
            for c in w:
                st = self.step(st, c)
                if st is None:
                    return False
            if st in seen:
                return True
            seen.add(st)
        return None

    def language(self, n: int, cap: int = DEFAULT_CAP) -> LanguageSlice:
        """Exactly L_n by prefix extension; a partial slice if ``cap`` is hit."""
        if n < 0:
            raise ValueError("length must be nonnegative")
        with self._lock:
            if not self._slices:
                self._slices[0] = (LanguageSlice(0, ((),)), (self.initial_state(),))
            if n in self._slices:
                return self._slices[n][0]
            start = max(k for k in self._slices if k <= n)
            sl, states = self._slices[start]
            current = list(zip(sl.words, states))
            complete = True
            for k in range(start + 1, n + 1):
                nxt = []
                for w, st in current:
                    for c in range(self.alphabet):
                        t = self.step(st, c)
                        if t is not None:
                            nxt.append((w + (c,), t))
                    if len(nxt) > cap:
                        complete = False
                        nxt = nxt[:cap]
                        break
                current = nxt
                if complete:
                    self._slices[k] = (LanguageSlice(k, tuple(w for w, _ in current)),
                                       tuple(st for _, st in current))
            if complete:
                return self._slices[n][0]
            return LanguageSlice(n, tuple(w for w, _ in current), False)

    def state_weights(self, n: int, weight: Callable[[int], float] | None = None):
        """DP over automaton states: maps each state reachable by a length-n
        word to the summed weight of those words (weight of a word is the
        product of ``weight(c)`` over its symbols, default 1).

        Returns ``(table, log_scale)`` with true weights ``table * exp(log_scale)``.
        """
        table = {self.initial_state(): 1.0}
        log_scale = 0.0
        for _ in range(n):
            nxt: Dict = {}
            for st, v in table.items():
                for c in range(self.alphabet):
                    t = self.step(st, c)
                    if t is not None:
                        wc = v if weight is None else v * weight(c)
                        nxt[t] = nxt.get(t, 0.0) + wc
            top = max(nxt.values(), default=0.0)
            if top > 0:
                table = {k: v / top for k, v in nxt.items()}
                log_scale += math.log(top)
            else:
                table = nxt
        return table, log_scale

    def check(self, w) -> Word:
        w = word(w)
        check_word(w, self.alphabet)
        return w

    def to_config(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_config()})"


def enumerate_language(model: ShiftModel, n: int, cap: int = DEFAULT_CAP) -> LanguageSlice:
    return model.language(n, cap)


def membership(model: ShiftModel, w) -> bool:
    return model.accepts(w)


def brute_force_language(model: ShiftModel, n: int) -> LanguageSlice:
    """Filter all ``alphabet**n`` words by membership (test oracle)."""
    words = [w for w in itertools.product(range(model.alphabet), repeat=n) if model.accepts(w)]
    return LanguageSlice(n, tuple(words))


# ---------------------------------------------------------------- full / SFT

class SFT(ShiftModel):
    """Shift of finite type given by forbidden words.

    The language is the set of words avoiding every forbidden word that can
    also be extended to the right forever (one-sided shift).
    """
    family = "sft"

    def __init__(self, alphabet: int, forbidden: Iterable = ()):
        super().__init__(alphabet)
        self.forbidden = tuple(sorted({word(f) for f in forbidden}))
        for f in self.forbidden:
            if not f:
                raise ValueError("empty forbidden word")
            check_word(f, alphabet)
        self.memory = max((len(f) for f in self.forbidden), default=1) - 1
        self._forbidden_set = frozenset(self.forbidden)
        self._lens = sorted({len(f) for f in self.forbidden})
        self.states, self.edges = self._memory_graph(self.memory)

    def _clean(self, w: Word) -> bool:
        return not any(w[i:i + k] in self._forbidden_set
                       for k in self._lens for i in range(len(w) - k + 1))

    def _clean_end(self, w: Word) -> bool:
        return not any(len(w) >= k and w[len(w) - k:] in self._forbidden_set for k in self._lens)

    def _memory_graph(self, order: int):
        """Right-essential states (``order``-words) and labelled edges."""
        states = [s for s in itertools.product(range(self.alphabet), repeat=order) if self._clean(s)]
        edges = {}
        for s in states:
            out = []
            for c in range(self.alphabet):
                t = s + (c,)
                if self._clean_end(t):
                    out.append((c, t[1:] if order else ()))
            edges[s] = out
        live = set(states)
        changed = True
        while changed:
            changed = False
            for s in list(live):
                if not any(t in live for _, t in edges[s]):
                    live.discard(s)
                    changed = True
        states = sorted(live)
        edges = {s: [(c, t) for c, t in edges[s] if t in live] for s in states}
        return states, edges

    def graph(self, order: int):
        """Memory graph of a given order (at least the SFT memory)."""
        if order < self.memory:
            raise ValueError("graph order must be at least the SFT memory")
        if order == self.memory:
            return self.states, self.edges
        return self._memory_graph(order)

    def accepts(self, w) -> bool:
        w = self.check(w)
        if not self._clean(w):
            return False
        M = self.memory
        live = set(self.states)
        if len(w) >= M:
            return (w[len(w) - M:] if M else ()) in live
        return any(s[:len(w)] == w for s in live)

    def step(self, state, c: int):
        t = state + (c,)
        if not self._clean_end(t):
            return None
        M = self.memory
        if len(t) >= M:
            t = t[len(t) - M:] if M else ()
            return t if t in self.edges else None
        return t if any(s[:len(t)] == t for s in self.states) else None

    def to_config(self) -> dict:
        return {"family": "sft", "alphabet": self.alphabet,
                "forbidden": [fmt(f) for f in self.forbidden]}


class FullShift(SFT):
    family = "full"

    def __init__(self, alphabet: int = 2):
        super().__init__(alphabet, ())

    def accepts(self, w) -> bool:
        self.check(w)
        return True

    def step(self, state, c: int):
        return ()

    def to_config(self) -> dict:
        return {"family": "full", "alphabet": self.alphabet}


def golden_mean() -> SFT:
    return SFT(2, ["11"])


# ---------------------------------------------------------------- beta shift

@dataclass(frozen=True)
class BetaExpansion:
    """Quasi-greedy expansion of 1 in base beta, with the positions at which
    a near-integer value was snapped (empty for exact rational beta)."""
    digits: Word
    snapped: Tuple[int, ...] = ()
    period: Optional[int] = None    # set when the remainder returns to 1


def parse_beta(spec, dps: int = 60):
    """``"p/q"``/decimal strings give exact rationals; ``"golden"`` and
    ``"sqrt:k"`` give mpmath reals at ``dps`` digits."""
    if isinstance(spec, (Fraction, int)):
        return Fraction(spec)
    if isinstance(spec, mpmath.mpf):
        return spec
    if isinstance(spec, float):
        return Fraction(spec)
    s = str(spec).strip()
    with mpmath.workdps(dps):
        if s == "golden":
            return (1 + mpmath.sqrt(5)) / 2
        if s.startswith("sqrt:"):
            return mpmath.sqrt(int(s[5:]))
    return Fraction(s)


def _rem_is_one(beta: Fraction, digits) -> bool:
    r = Fraction(1)
    for d in digits:
        r = beta * r - d
    return r == 1


def beta_expansion(beta, depth: int, dps: int = 60) -> BetaExpansion:
    """Quasi-greedy expansion of 1 to ``depth`` digits.

    Recursion r_0 = 1, d_k = ceil(beta r_{k-1}) - 1, r_k = beta r_{k-1} - d_k,
    which agrees with the greedy expansion unless that one is finite, in which
    case it yields the periodic quasi-greedy form.
    """
    beta = parse_beta(beta, dps)
    if beta <= 1:
        raise ValueError("beta must exceed 1")
    digits = []
    snapped = []
    if isinstance(beta, Fraction):
        r = Fraction(1)
        for _ in range(depth):
            x = beta * r
            d = math.ceil(x) - 1
            digits.append(d)
            r = x - d
        period = next((k + 1 for k in range(depth) if _rem_is_one(beta, digits[:k + 1])), None)
        return BetaExpansion(tuple(digits), (), period)
    with mpmath.workdps(dps):
        eps = mpmath.mpf(10) ** (-(dps - 10))
        r = mpmath.mpf(1)
        for k in range(depth):
            x = beta * r
            j = int(mpmath.nint(x))
            if abs(x - j) < eps:
                d = j - 1
                r = mpmath.mpf(1)
                snapped.append(k)
            else:
                d = int(mpmath.ceil(x)) - 1
                r = x - d
            digits.append(d)
    return BetaExpansion(tuple(digits), tuple(snapped), snapped[0] + 1 if snapped else None)


class BetaShift(ShiftModel):
    """beta-shift: w is admissible iff each suffix of w is lexicographically
    at most the same-length prefix of the quasi-greedy expansion of 1."""
    family = "beta"

    def __init__(self, beta, depth: int = 64, dps: int = 60):
        self.beta = parse_beta(beta, dps)
        if self.beta <= 1:
            raise ValueError("beta must exceed 1")
        self.depth = depth
        self.dps = dps
        self.expansion = beta_expansion(self.beta, depth, dps)
        super().__init__(int(math.ceil(self.beta)) if isinstance(self.beta, Fraction)
                         else int(mpmath.ceil(self.beta)))
        self._beta_spec = beta if isinstance(beta, str) else str(self.beta)

    def _need(self, n: int) -> None:
        if n > self.depth:
            raise PrecisionError(f"word length {n} exceeds expansion depth {self.depth}")

    def accepts(self, w) -> bool:
        w = self.check(w)
        self._need(len(w))
        d = self.expansion.digits
        n = len(w)
        return all(w[i:] <= d[:n - i] for i in range(n))

    def periodic_ok(self, w, repeats: int = 64):
        """w^infinity is admissible iff every rotation, repeated, stays <= the
        expansion; None when some rotation agrees with it through ``depth``."""
        w = self.check(w)
        if not w:
            raise ValueError("periodic word must be nonempty")
        d = tuple(self.expansion.digits[:self.depth])
        unknown = False
        for i in range(len(w)):
            rot = w[i:] + w[:i]
            seq = (rot * (len(d) // len(rot) + 1))[:len(d)]
            if seq > d:
                return False
            unknown |= seq == d
        if unknown and self.expansion.period is not None \
                and len(w) + self.expansion.period <= len(d):
            return True     # two periodic sequences agreeing this long are equal
        return None if unknown else True

    def precision_flag(self, w) -> bool:
        """True when the verdict for ``w`` used a snapped (near-integer) digit."""
        return any(k < len(w) for k in self.expansion.snapped)

    def to_config(self) -> dict:
        return {"family": "beta", "beta": self._beta_spec, "depth": self.depth, "dps": self.dps}


# ---------------------------------------------------------------- coded shifts

class CodedModel(ShiftModel):
    """Coded shift: subwords of free concatenations of a generating set G."""

    uniquely_decipherable = False

    def __init__(self, alphabet: int):
        super().__init__(alphabet)
        self._gstar: Dict[int, Tuple[Word, ...]] = {0: ((),)}

    def generator_words(self, n: int) -> List[Word]:
        raise NotImplementedError

    def max_generator_length(self) -> int | None:
        return None

    def concat_words(self, n: int, cap: int = DEFAULT_CAP) -> List[Word]:
        """G*_n: concatenations of generators of total length ``n``."""
        with self._lock:
            for k in range(1, n + 1):
                if k in self._gstar:
                    continue
                out = set() if not self.uniquely_decipherable else []
                for j in range(1, k + 1):
                    gs = self.generator_words(j)
                    if not gs:
                        continue
                    for g in gs:
                        for rest in self._gstar[k - j]:
                            if isinstance(out, set):
                                out.add(g + rest)
                            else:
                                out.append(g + rest)
                            if len(out) > cap:
                                raise CapExceeded(f"G*_{k} exceeds cap {cap}")
                self._gstar[k] = tuple(sorted(out))
            return list(self._gstar[n])

    def is_generator(self, w: Word) -> bool:
        return tuple(w) in set(self.generator_words(len(w)))

    def in_concatenation(self, w) -> bool:
        """Is ``w`` in G* (including the empty word)?"""
        w = word(w)
        n = len(w)
        ok = [False] * (n + 1)
        ok[0] = True
        for i in range(1, n + 1):
            for j in range(i):
                if ok[j] and self.is_generator(w[j:i]):
                    ok[i] = True
                    break
        return ok[n]

    def subword_of_generator(self, w: Word) -> bool:
        raise NotImplementedError

    def dg_words(self, n: int) -> List[Word]:
        """D(G)_n: language words that are subwords of some generator."""
        return [w for w in self.language(n).words if self.subword_of_generator(w)]


def blocks(w: Sequence[int]) -> List[Tuple[int, int]]:
    """Maximal 0^a 1^b blocks of a binary word, as (a, b) pairs."""
    out = []
    i, n = 0, len(w)
    while i < n:
        a = 0
        while i < n and w[i] == 0:
            a += 1
            i += 1
        b = 0
        while i < n and w[i] == 1:
            b += 1
            i += 1
        out.append((a, b))
    return out


def _last_block(w: Word) -> Tuple[int, int, bool]:
    n = len(w)
    i = n
    while i > 0 and w[i - 1] == 1:
        i -= 1
    b = n - i
    while i > 0 and w[i - 1] == 0:
        i -= 1
    a = n - i - b
    return a, b, i == 0


class Staircase(CodedModel):
    """Coded shift generated by G = {0^a 1^b : a, b >= f(a+b)}."""
    family = "staircase"
    uniquely_decipherable = True

    def __init__(self, f, n1: int | None = None):
        super().__init__(2)
        self.f = parse_sequence(f)
        self.n1 = staircase_threshold(self.f) if n1 is None else int(n1)
        check_staircase_function(self.f, self.n1)

    # admissibility of the blocks -------------------------------------------
    def is_generator_block(self, a: int, b: int) -> bool:
        fn = self.f(a + b)
        return a >= fn and b >= fn

    def _suffix_ok(self, a1: int, b1: int) -> bool:
        """0^a1 1^b1 (1-run exact) is a suffix of some generator."""
        if a1 == 0:
            # a bare 1-run may be the tail of a longer one
            return True
        for a in range(max(a1, 1), max(a1, b1, 1) + 1):
            fn = self.f(a + b1)
            if fn > b1:
                return False
            if a >= fn:
                return True
        return False

    def _prefix_ok(self, am: int, bm: int) -> bool:
        """0^am 1^bm (0-run exact) is a prefix of some generator."""
        if bm == 0:
            # a trailing 0-run can still grow: 0^x 1^x with x large always works
            return True
        for b in range(max(bm, 1), max(bm, am, 1) + 1):
            fn = self.f(am + b)
            if fn > am:
                return False
            if b >= fn:
                return True
        return False

    def accepts(self, w) -> bool:
        w = self.check(w)
        bl = blocks(w)
        if len(bl) <= 1:
            return True
        if not self._suffix_ok(*bl[0]):
            return False
        if not all(self.is_generator_block(a, b) for a, b in bl[1:-1]):
            return False
        return self._prefix_ok(*bl[-1])

    def initial_state(self):
        # (zeros, ones) of the last block and whether it is the first block
        return (0, 0, True)

    def step(self, state, c: int):
        a, b, first = state
        if c == 1:
            if first or self._prefix_ok(a, b + 1):
                return (a, b + 1, first)
            return None
        if b == 0:
            return (a + 1, 0, first)
        closed = self._suffix_ok(a, b) if first else self.is_generator_block(a, b)
        return (1, 0, False) if closed else None

    # generating set and friends ----------------------------------------------
    def generator_words(self, n: int) -> List[Word]:
        fn = self.f(n) if n >= 1 else 1
        return sorted((0,) * a + (1,) * (n - a) for a in range(fn, n - fn + 1))

    def is_generator(self, w: Word) -> bool:
        bl = blocks(w)
        return len(bl) == 1 and bl[0][0] >= 1 and self.is_generator_block(*bl[0])

    def in_concatenation(self, w) -> bool:
        w = word(w)
        if not w:
            return True
        bl = blocks(w)
        return bl[-1][1] > 0 and all(a >= 1 and self.is_generator_block(a, b) for a, b in bl)

    def generator_blocks(self, n: int) -> List[Tuple[int, int]]:
        """(a, b) with 0^a 1^b in G_n."""
        fn = self.f(n) if n >= 1 else 1
        return [(a, n - a) for a in range(fn, n - fn + 1)]

    def periodic_ok(self, w, repeats: int = 64):
        w = self.check(w)
        if not w:
            raise ValueError("periodic word must be nonempty")
        if len(set(w)) == 1:
            return True
        # rotate so the cycle reads as whole blocks 0^a 1^b
        i = next(i for i in range(len(w)) if w[i] == 0 and w[i - 1] == 1)
        return all(self.is_generator_block(a, b) for a, b in blocks(w[i:] + w[:i]))

    def dg_words(self, n: int) -> List[Word]:
        return [(0,) * a + (1,) * (n - a) for a in range(n, -1, -1)]

    def prefix_words(self, n: int) -> List[Word]:
        """P_n = {0^a 1^b : a + b = n, a < f(n)}."""
        if n == 0:
            return [()]
        return sorted((0,) * a + (1,) * (n - a) for a in range(0, min(n, self.f(n) - 1) + 1))

    def suffix_words(self, n: int) -> List[Word]:
        """S_n = {0^a 1^b : a + b = n, b < f(n)}."""
        if n == 0:
            return [()]
        return sorted((0,) * (n - b) + (1,) * b for b in range(0, min(n, self.f(n) - 1) + 1))

    def subword_of_generator(self, w: Word) -> bool:
        bl = blocks(w)
        if len(bl) > 1:
            return False
        a, b = bl[0] if bl else (0, 0)
        x = max(a, b, 1)
        while True:
            if self.f(2 * x) <= x:
                return True
            x += 1

    def to_config(self) -> dict:
        return {"family": "staircase", "f": self.f.to_config(), "n1": self.n1}


class SGap(CodedModel):
    """S-gap shift, generated by {0^s 1 : s in S}."""
    family = "sgap"
    uniquely_decipherable = True

    def __init__(self, S):
        super().__init__(2)
        self.S = parse_gap_set(S)

    def accepts(self, w) -> bool:
        w = self.check(w)
        ones = [i for i, c in enumerate(w) if c == 1]
        if not ones:
            return self.S.has_at_least(len(w))
        if not self.S.has_at_least(ones[0]):
            return False
        if not self.S.has_at_least(len(w) - 1 - ones[-1]):
            return False
        return all(j - i - 1 in self.S for i, j in zip(ones, ones[1:]))

    def initial_state(self):
        # zeros since the last 1 (or since the start) and whether a 1 was seen
        return (0, False)

    def step(self, state, c: int):
        z, seen = state
        if c == 0:
            return (z + 1, seen) if self.S.has_at_least(z + 1) else None
        ok = (z in self.S) if seen else self.S.has_at_least(z)
        return (0, True) if ok else None

    def periodic_ok(self, w, repeats: int = 64):
        w = self.check(w)
        if not w:
            raise ValueError("periodic word must be nonempty")
        if 1 not in w:
            return self.S.tail_in
        i = w.index(1) + 1
        r = w[i:] + w[:i]
        ones = [j for j, c in enumerate(r) if c == 1]
        gaps = [ones[0]] + [b - a - 1 for a, b in zip(ones, ones[1:])]
        return all(g in self.S for g in gaps)

    def generator_words(self, n: int) -> List[Word]:
        return [(0,) * (n - 1) + (1,)] if n >= 1 and (n - 1) in self.S else []

    def is_generator(self, w: Word) -> bool:
        return len(w) >= 1 and w[-1] == 1 and 1 not in w[:-1] and (len(w) - 1) in self.S

    def subword_of_generator(self, w: Word) -> bool:
        if not w:
            return True
        if 1 in w[:-1]:
            return False
        if w[-1] == 1:
            return self.S.has_at_least(len(w) - 1)
        return self.S.has_at_least(len(w))

    def to_config(self) -> dict:
        return {"family": "sgap", "S": self.S.to_config()}


class GeneratedCoded(CodedModel):
    """Coded shift from an explicit finite generating set."""
    family = "coded"

    def __init__(self, alphabet: int, generators: Iterable):
        super().__init__(alphabet)
        gens = sorted({word(g) for g in generators})
        if not gens or any(len(g) == 0 for g in gens):
            raise ValueError("generators must be a nonempty set of nonempty words")
        for g in gens:
            check_word(g, alphabet)
        self.generators = tuple(gens)
        from .structure import sardinas_patterson
        self.uniquely_decipherable = sardinas_patterson(self.generators).unique
        self._gset = frozenset(gens)

    def generator_words(self, n: int) -> List[Word]:
        return [g for g in self.generators if len(g) == n]

    def is_generator(self, w: Word) -> bool:
        return tuple(w) in self._gset

    def max_generator_length(self) -> int:
        return max(len(g) for g in self.generators)

    def initial_state(self):
        # NFA over (generator, position); position 0 is shared by all generators
        return frozenset((gi, p) for gi, g in enumerate(self.generators) for p in range(len(g)))

    def step(self, state, c: int):
        nxt = set()
        for gi, p in state:
            g = self.generators[gi]
            if g[p] != c:
                continue
            if p + 1 < len(g):
                nxt.add((gi, p + 1))
            else:
                nxt.update((gj, 0) for gj in range(len(self.generators)))
        return frozenset(nxt) if nxt else None

    def accepts(self, w) -> bool:
        return self.state_of(self.check(w)) is not None

    def subword_of_generator(self, w: Word) -> bool:
        w = tuple(w)
        k = len(w)
        return any(g[i:i + k] == w for g in self.generators for i in range(len(g) - k + 1))

    def to_config(self) -> dict:
        return {"family": "coded", "alphabet": self.alphabet,
                "generators": [fmt(g) for g in self.generators]}


# ---------------------------------------------------------------- block codes

@dataclass(frozen=True)
class BlockCode:
    """Sliding block code with forward window of length ``radius + 1``."""
    radius: int
    table: Dict[Word, int]
    out_alphabet: int

    def __call__(self, w) -> Word:
        w = word(w)
        r = self.radius
        try:
            return tuple(self.table[w[i:i + r + 1]] for i in range(len(w) - r))
        except KeyError as exc:
            raise ValueError(f"block code not defined on window {fmt(exc.args[0])}") from None

    @classmethod
    def from_function(cls, radius: int, alphabet: int, func: Callable[[Word], int],
                      out_alphabet: int) -> "BlockCode":
        table = {w: int(func(w)) for w in itertools.product(range(alphabet), repeat=radius + 1)}
        return cls(radius, table, out_alphabet)


def transferred_mistake(r: int, g: Callable[[int], int]) -> Callable[[int], int]:
    """The factor mistake function (4r+3) g(n+2r) + 4r."""
    def gt(n: int) -> int:
        return (4 * r + 3) * g(n + 2 * r) + 4 * r
    return gt


def apply_factor_code(model: ShiftModel, code: BlockCode, g: Callable[[int], int], n: int,
                      cap: int = DEFAULT_CAP):
    """Image slice {code(w) : w in L_{n+r}} and the transferred mistake function."""
    src = model.language(n + code.radius, cap)
    if not src.complete:
        raise CapExceeded(f"L_{n + code.radius} exceeds cap {cap}")
    for w in model.language(code.radius + 1, cap).words:
        if w not in code.table:
            raise ValueError(f"block code is not total: missing window {fmt(w)}")
    image = make_slice(n, (code(w) for w in src.words))
    return image, transferred_mistake(code.radius, g)


# ---------------------------------------------------------------- config

def model_from_config(cfg) -> ShiftModel:
    """Build a model from a JSON-style dict (see README for the schema)."""
    if isinstance(cfg, ShiftModel):
        return cfg
    if isinstance(cfg, str):
        cfg = {"family": cfg}
    if not isinstance(cfg, dict) or "family" not in cfg:
        raise ValueError(f"model config needs a 'family' key: {cfg!r}")
    fam = cfg["family"]
    if fam in ("full", "full-2"):
        return FullShift(int(cfg.get("alphabet", 2)))
    if fam == "golden":
        return golden_mean()
    if fam == "sft":
        return SFT(int(cfg.get("alphabet", 2)), cfg.get("forbidden", []))
    if fam == "beta":
        return BetaShift(cfg["beta"], int(cfg.get("depth", 64)), int(cfg.get("dps", 60)))
    if fam == "sgap":
        return SGap(cfg.get("S", "all"))
    if fam == "staircase":
        return Staircase(cfg.get("f", "const:1"), cfg.get("n1"))
    if fam == "coded":
        return GeneratedCoded(int(cfg.get("alphabet", 2)), cfg["generators"])
    raise ValueError(f"unknown model family {fam!r}")
