from __future__ import annotations

import math

import pytest

from shiftlab.sequences import parse_sequence, staircase_threshold


def test_builtins():
    assert [parse_sequence("const:2")(n) for n in (1, 5, 100)] == [2, 2, 2]
    assert [parse_sequence("ceil_n_over:4")(n) for n in (1, 4, 5, 8, 9)] == [1, 1, 2, 2, 3]
    assert [parse_sequence("ceil_log2")(n) for n in (1, 2, 3, 4, 7, 8)] == [1, 2, 2, 3, 3, 4]
    g = parse_sequence("ceil_loglog")
    assert g(1) == math.ceil(math.log(math.log(1 + math.e)))


def test_table_with_tail():
    f = parse_sequence({"table": [1, 1, 2], "tail": "ceil_n_over:3"})
    assert [f(n) for n in range(1, 7)] == [1, 1, 2, 2, 2, 2]


@pytest.mark.parametrize("name,gamma", [("ceil_n_over:4", 0.5), ("ceil_log2", 0.25)])
def test_tail_bounds_dominate(name, gamma):
    f = parse_sequence(name)
    for N in (10, 100, 1000):
        direct = math.fsum(gamma ** f(n) for n in range(N + 1, 200_000))
        assert direct <= f.tail_sum(gamma, N)


def test_constant_tail_infinite():
    assert parse_sequence("const:1").tail_sum(0.5, 10) == math.inf


def test_threshold():
    assert staircase_threshold(parse_sequence("const:1")) == 2
    f = parse_sequence("ceil_n_over:4")
    n1 = staircase_threshold(f)
    assert all(f(n) <= n / 2 for n in range(n1, 500))


def test_unknown_name():
    with pytest.raises(ValueError):
        parse_sequence("nope")
