"""Finite words over ``{0, ..., A-1}``, Hamming geometry and binomial entropy.

Words are plain tuples of ints.  Strings like ``"0110"`` are accepted wherever
a word is expected and converted with :func:`word`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple, Union

import numpy as np

Word = Tuple[int, ...]
WordLike = Union[Word, Sequence[int], str]

DEFAULT_BALL_CAP = 200_000


def word(w: WordLike) -> Word:
    """Normalize a string or integer sequence to a word tuple."""
    if isinstance(w, str):
        return tuple(int(c) for c in w)
    return tuple(int(c) for c in w)


def fmt(w: Iterable[int]) -> str:
    return "".join(str(c) for c in w)


def all_words(alphabet: int, n: int) -> Iterator[Word]:
    """Every word of length ``n``, in lexicographic order."""
    return itertools.product(range(alphabet), repeat=n)


def check_word(w: Word, alphabet: int) -> None:
    for c in w:
        if not 0 <= c < alphabet:
            raise ValueError(f"symbol {c} outside alphabet of size {alphabet}")


def hamming(v: WordLike, w: WordLike) -> int:
    """Number of positions where ``v`` and ``w`` differ."""
    v, w = word(v), word(w)
    if len(v) != len(w):
        raise ValueError(f"Hamming distance needs equal lengths, got {len(v)} and {len(w)}")
    return sum(1 for a, b in zip(v, w) if a != b)


def binary_entropy(t: float) -> float:
    """h(t) = -t log t - (1-t) log(1-t), with h(0) = h(1) = 0."""
    if t < 0 or t > 1:
        raise ValueError("entropy argument must lie in [0, 1]")
    if t == 0 or t == 1:
        return 0.0
    return -t * math.log(t) - (1 - t) * math.log1p(-t)


def log_binomial(m: int, k: int) -> float:
    """Exact log C(m, k) (natural log)."""
    if m < 0 or k < 0 or k > m:
        raise ValueError(f"log_binomial needs 0 <= k <= m, got m={m}, k={k}")
    return math.log(math.comb(m, k))


def log_binomial_estimate(m: int, k: int) -> float:
    """The leading-order estimate m * h(k/m) of log C(m, k)."""
    if m < 0 or k < 0 or k > m:
        raise ValueError(f"log_binomial_estimate needs 0 <= k <= m, got m={m}, k={k}")
    if m == 0:
        return 0.0
    return m * binary_entropy(k / m)


def log_factorial_table(m_max: int) -> np.ndarray:
    """``table[j] = log j!`` for ``0 <= j <= m_max`` by cumulative log sums."""
    logs = np.zeros(m_max + 1)
    if m_max >= 1:
        logs[1:] = np.log(np.arange(1, m_max + 1, dtype=np.float64))
    return np.cumsum(logs)


def fit_binomial_constant(m_max: int) -> float:
    """Smallest c with |log C(m,k) - m h(k/m)| <= c log m for 2 <= m <= m_max, all k.

    Uses a summed-logarithm factorial table, so the sweep is exact up to
    floating rounding (no Stirling approximation is involved).
    """
    if m_max < 2:
        raise ValueError("need m_max >= 2")
    lf = log_factorial_table(m_max)
    worst = 0.0
    for m in range(2, m_max + 1):
        k = np.arange(m + 1)
        exact = lf[m] - lf[k] - lf[m - k]
        p = k / m
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -np.where(p > 0, p * np.log(p), 0.0) - np.where(p < 1, (1 - p) * np.log1p(-p), 0.0)
        ratio = np.max(np.abs(exact - m * h)) / math.log(m)
        worst = max(worst, float(ratio))
    return worst


@dataclass(frozen=True)
class HammingBall:
    """Size of a Hamming ball in the full cube ``A^m``.

    ``count`` is ``None`` when enumeration was skipped because the cap was hit;
    ``exact_bound`` is sum_{j<=k} C(m,j)(A-1)^j and ``binomial_bound`` is
    C(m,k) A^k.
    """
    count: int | None
    exact_bound: int
    binomial_bound: int
    enumerated: bool


def hamming_ball(w: WordLike, k: int, alphabet: int, cap: int = DEFAULT_BALL_CAP) -> HammingBall:
    w = word(w)
    m = len(w)
    if k < 0 or k > m:
        raise ValueError(f"radius must satisfy 0 <= k <= |w|, got k={k}, |w|={m}")
    check_word(w, alphabet)
    exact = sum(math.comb(m, j) * (alphabet - 1) ** j for j in range(k + 1))
    binom = math.comb(m, k) * alphabet ** k
    if binom > cap:
        return HammingBall(None, exact, binom, False)
    seen = set()
    for j in range(k + 1):
        for positions in itertools.combinations(range(m), j):
            choices = [[c for c in range(alphabet) if c != w[p]] for p in positions]
            for subst in itertools.product(*choices):
                v = list(w)
                for p, c in zip(positions, subst):
                    v[p] = c
                seen.add(tuple(v))
    return HammingBall(len(seen), exact, binom, True)


def ball_size(m: int, k: int, alphabet: int) -> int:
    """Exact number of words of length m within distance k of a fixed word."""
    k = min(k, m)
    if k < 0:
        return 0
    return sum(math.comb(m, j) * (alphabet - 1) ** j for j in range(k + 1))


def as_array(words: Sequence[Word], n: int) -> np.ndarray:
    if not words:
        return np.zeros((0, n), dtype=np.int8)
    return np.asarray(words, dtype=np.int8).reshape(len(words), n)
