"""Shared brute-force oracles: a plain byte sieve and a scan-everything
pattern search, kept independent of the package internals on purpose."""

import math

import pytest


def sieve_table(n: int) -> bytearray:
    """table[i] == 1 iff i is prime, for 0 <= i <= n."""
    t = bytearray([1]) * (n + 1)
    t[0] = t[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if t[p]:
            t[p * p :: p] = b"\x00" * ((n - p * p) // p + 1)
    return t


def naive_pattern_xs(forms, n, table) -> list:
    """Reference answer: scan every x, check each form value in the table."""
    out = []
    x = 0
    while True:
        vals = [a * x + b for a, b in forms]
        if max(vals) > n:
            break
        if all(v >= 2 and table[v] for v in vals):
            out.append(x)
        x += 1
    return out


# the pattern corpus exercised by oracle-equivalence tests
CORPUS = {
    "twin": [(1, 0), (1, 2)],
    "triple_226": [(1, 0), (1, 2), (1, 6)],
    "triple_246": [(1, 0), (1, 4), (1, 6)],
    "quad": [(1, 0), (1, 2), (1, 6), (1, 8)],
    "chernick": [(6, 1), (12, 1), (18, 1)],
    "cunningham_first_3": [(1, 0), (2, 1), (4, 3)],
    "cunningham_second_3": [(1, 0), (2, -1), (4, -3)],
}


@pytest.fixture(scope="session")
def table_1e6():
    return sieve_table(10**6)


@pytest.fixture(scope="session")
def table_1e5():
    return sieve_table(10**5)
