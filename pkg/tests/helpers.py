"""Independent brute-force oracles used to freeze expected values.

Nothing here imports the partition expansion under test: partitions are
recovered from labelled set partitions, and generating-function checks use a
tiny truncated-series implementation written directly against the defining
power series.
"""

from collections import Counter
from fractions import Fraction
from itertools import product
from math import factorial
from random import Random


# -- set partitions and the induced multi-index partitions ------------------


def set_partitions(items):
    """All set partitions of a list, as lists of blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [part[k] + [first]] + part[k + 1 :]
        yield part + [[first]]


def labelled_items(i):
    """|i| items labelled by their coordinate: i = (2,1) -> [0, 0, 1]."""
    return [r for r, e in enumerate(i) for _ in range(e)]


def brute_partitions_with_counts(i):
    """Map column-multiset -> number of labelled set partitions inducing it.

    The keys enumerate the partitions of the multi-index i; the counts are
    the weights i!/(multiplicities! columns!) by the subdivision bijection.
    """
    m = len(i)
    out = Counter()
    for part in set_partitions(list(range(sum(i)))):
        labels = labelled_items(i)
        cols = []
        for block in part:
            col = [0] * m
            for item in block:
                col[labels[item]] += 1
            cols.append(tuple(col))
        key = tuple(sorted(Counter(cols).items()))
        out[key] += 1
    return dict(out)


def bell_number(d):
    return sum(1 for _ in set_partitions(list(range(d))))


# -- truncated multivariate series, written from the definitions ------------


def s_mul(p, q, cap):
    out = {}
    for ka, ca in p.items():
        for kb, cb in q.items():
            k = tuple(a + b for a, b in zip(ka, kb))
            if sum(k) <= cap:
                out[k] = out.get(k, Fraction(0)) + ca * cb
    return {k: c for k, c in out.items() if c}


def s_compose_scalar(coeffs, u, cap):
    """sum_r coeffs[r] * u^r truncated; u has zero constant term."""
    m = len(next(iter(u), ()) or (0,))
    total = {}
    power = {(0,) * m: Fraction(1)}
    for r, c in enumerate(coeffs):
        if r > 0:
            power = s_mul(power, u, cap)
        for k, v in power.items():
            total[k] = total.get(k, Fraction(0)) + c * v
    return {k: c for k, c in total.items() if c}


def s_exp(u, cap):
    return s_compose_scalar([Fraction(1, factorial(r)) for r in range(cap + 1)], u, cap)


def s_log1p(u, cap):
    return s_compose_scalar(
        [Fraction(0)] + [Fraction((-1) ** (r - 1), r) for r in range(1, cap + 1)], u, cap
    )


def s_reciprocal1p(u, cap):
    return s_compose_scalar([Fraction((-1) ** r) for r in range(cap + 1)], u, cap)


def mgf_minus_one(table, cap):
    """f(mu, t) - 1 from a moment table {index: value}."""
    return {
        k: Fraction(v) / index_factorial(k) for k, v in table.items() if 0 < sum(k) <= cap
    }


def series_moment(series, k):
    return series.get(tuple(k), Fraction(0)) * index_factorial(k)


def index_factorial(k):
    out = 1
    for e in k:
        out *= factorial(e)
    return out


# -- random exact inputs ----------------------------------------------------


def all_indices(m, max_order, include_zero=False):
    for k in product(range(max_order + 1), repeat=m):
        if sum(k) <= max_order and (include_zero or sum(k) > 0):
            yield k


def random_moment_values(rng: Random, m, max_order):
    return {
        k: Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        for k in all_indices(m, max_order)
    }


def random_spd_matrix(rng: Random, n):
    """Random symmetric positive definite matrix with rational entries."""
    m = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    out = [[sum(m[a][k] * m[b][k] for k in range(n)) for b in range(n)] for a in range(n)]
    for a in range(n):
        out[a][a] += Fraction(1 + rng.randint(0, 2))
    return tuple(tuple(r) for r in out)
