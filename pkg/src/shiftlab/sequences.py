"""Integer sequence oracles used as staircase functions f, mistake functions g,
and gap sets S.

Named built-ins: ``const:c``, ``ceil_n_over:k``, ``ceil_log2`` (= ceil(log2(n+1))),
``ceil_loglog`` (= ceil(log log(n+e))), and explicit tables
``{"table": [f(1), ..., f(T)], "tail": <built-in name> | "const"}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

SCAN_LIMIT = 4096


@dataclass(frozen=True)
class IntSequence:
    """A nondecreasing integer sequence n -> f(n), n >= 1.

    ``tail`` computes an upper bound on sum_{n>N} gamma**f(n) (``inf`` when
    the series diverges or no analytic bound is known).  ``bound`` is the
    eventual constant value for bounded sequences, else ``None``.
    """
    name: str
    func: Callable[[int], int]
    tail: Callable[[float, int], float] | None = None
    bound: int | None = None
    witness: float | None = None
    spec: object = None

    def __call__(self, n: int) -> int:
        return self.func(n)

    def values(self, n_max: int) -> np.ndarray:
        """``f(1), ..., f(n_max)`` as an int64 array."""
        return np.fromiter((self.func(n) for n in range(1, n_max + 1)), dtype=np.int64, count=n_max)

    @property
    def eventually_constant(self) -> bool:
        return self.bound is not None

    def tail_sum(self, gamma: float, N: int) -> float:
        """Upper bound on sum_{n>N} gamma**f(n)."""
        if not 0 < gamma < 1:
            return math.inf
        if self.bound is not None:
            return math.inf
        if self.tail is None:
            return math.inf
        return self.tail(gamma, N)

    def to_config(self):
        return self.spec if self.spec is not None else self.name


def _const(c: int) -> IntSequence:
    return IntSequence(f"const:{c}", lambda n: c, bound=c, spec=f"const:{c}")


def _ceil_n_over(k: int) -> IntSequence:
    if k < 1:
        raise ValueError("ceil_n_over needs k >= 1")

    def tail(gamma: float, N: int) -> float:
        q = -(-(N + 1) // k)
        return (q * k - N) * gamma ** q + k * gamma ** (q + 1) / (1 - gamma)

    return IntSequence(f"ceil_n_over:{k}", lambda n: -(-n // k), tail=tail, witness=0.5,
                       spec=f"ceil_n_over:{k}")


def _ceil_log2() -> IntSequence:
    # ceil(log2(n+1)) = n.bit_length(); level j holds n in [2^(j-1), 2^j - 1].
    def tail(gamma: float, N: int) -> float:
        if 2 * gamma >= 1:
            return math.inf
        j0 = (N + 1).bit_length()
        first = (2 ** j0 - 1 - N) * gamma ** j0
        return first + 0.5 * (2 * gamma) ** (j0 + 1) / (1 - 2 * gamma)

    return IntSequence("ceil_log2", lambda n: int(n).bit_length(), tail=tail, witness=0.25,
                       spec="ceil_log2")


def _ceil_loglog() -> IntSequence:
    return IntSequence("ceil_loglog", lambda n: math.ceil(math.log(math.log(n + math.e))),
                       spec="ceil_loglog")


def _table(values: Sequence[int], tail_rule: str) -> IntSequence:
    values = [int(v) for v in values]
    if not values:
        raise ValueError("table must be nonempty")
    T = len(values)
    if tail_rule == "const":
        rest = _const(values[-1])
    else:
        rest = parse_sequence(tail_rule)

    def func(n: int) -> int:
        return values[n - 1] if n <= T else rest(n)

    def tail(gamma: float, N: int) -> float:
        if N >= T:
            return rest.tail_sum(gamma, N)
        head = sum(gamma ** values[n - 1] for n in range(N + 1, T + 1))
        return head + rest.tail_sum(gamma, T)

    spec = {"table": values, "tail": tail_rule}
    return IntSequence(f"table[{T}]+{rest.name}", func, tail=tail, bound=rest.bound,
                       witness=rest.witness, spec=spec)


def parse_sequence(spec) -> IntSequence:
    """Build a sequence from a built-in name or a table dict."""
    if isinstance(spec, IntSequence):
        return spec
    if isinstance(spec, dict):
        if "table" not in spec:
            raise ValueError(f"sequence dict needs a 'table' key: {spec!r}")
        return _table(spec["table"], spec.get("tail", "const"))
    if not isinstance(spec, str):
        raise ValueError(f"unrecognised sequence spec {spec!r}")
    name, _, arg = spec.partition(":")
    if name == "const":
        return _const(int(arg))
    if name == "ceil_n_over":
        return _ceil_n_over(int(arg))
    if name == "ceil_log2":
        return _ceil_log2()
    if name == "ceil_loglog":
        return _ceil_loglog()
    raise ValueError(f"unknown built-in sequence {spec!r}")


def sequence_from_function(name: str, func: Callable[[int], int]) -> IntSequence:
    """Wrap an arbitrary callable; it gets no tail certificate."""
    return IntSequence(name, func)


def staircase_threshold(f: IntSequence, scan: int = SCAN_LIMIT) -> int:
    """Smallest n1 with 1 <= f(n) <= n/2 for every scanned n >= n1."""
    last_bad = 0
    for n in range(1, scan + 1):
        v = f(n)
        if v < 1 or 2 * v > n:
            last_bad = n
    if last_bad >= scan // 2:
        raise ValueError(f"{f.name}: f(n) <= n/2 fails up to n={last_bad}; not a staircase function")
    return last_bad + 1


def check_staircase_function(f: IntSequence, n1: int, scan: int = SCAN_LIMIT) -> None:
    """Reject f that is decreasing, < 1, or exceeds n/2 past n1 on the sampled range."""
    prev = None
    for n in range(1, scan + 1):
        v = f(n)
        if v < 1:
            raise ValueError(f"{f.name}: f({n}) = {v} < 1")
        if prev is not None and v < prev:
            raise ValueError(f"{f.name}: not nondecreasing at n={n}")
        if n >= n1 and 2 * v > n:
            raise ValueError(f"{f.name}: f({n}) = {v} > n/2 although n >= n1 = {n1}")
        prev = v


@dataclass(frozen=True)
class GapSet:
    """A set S of gap lengths, decided by a table up to ``threshold`` and
    constant (all in / all out) beyond it."""
    members: frozenset = field(default_factory=frozenset)
    threshold: int = 0
    tail_in: bool = True

    def __contains__(self, s: int) -> bool:
        if s < 0:
            return False
        if s <= self.threshold:
            return s in self.members
        return self.tail_in

    def has_at_least(self, a: int) -> bool:
        """Is there s in S with s >= a?"""
        if self.tail_in:
            return True
        return any(s >= a for s in self.members)

    def to_config(self):
        return {"members": sorted(self.members), "threshold": self.threshold,
                "tail": "in" if self.tail_in else "out"}


def parse_gap_set(spec) -> GapSet:
    if isinstance(spec, GapSet):
        return spec
    if spec == "all":
        return GapSet(frozenset(), -1, True)
    if isinstance(spec, dict):
        members = frozenset(int(s) for s in spec.get("members", []))
        threshold = int(spec.get("threshold", max(members, default=0)))
        if any(s > threshold for s in members):
            raise ValueError("gap set members must not exceed the threshold")
        tail = spec.get("tail", "out")
        if tail not in ("in", "out"):
            raise ValueError("gap set tail must be 'in' or 'out'")
        gs = GapSet(members, threshold, tail == "in")
        if not gs.tail_in and not gs.members:
            raise ValueError("gap set is empty")
        return gs
    raise ValueError(f"unrecognised gap set spec {spec!r}")
