"""Compressed multivariate Faa di Bruno expansion.

The core expansion writes the i-th derivative symbol of a composite function
as a sum over partitions of i: each partition lambda contributes the integer
weight i!/(multiplicities(lambda)! * columns(lambda)!), an outer factor of
degree length(lambda) and one inner factor per column.  The full multivariate
formula distributes a multinomial sum over ordered decompositions of i into
one part per inner function and merges the per-function expansions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

from . import series
from .algebra import FormulaPoly
from .errors import MissingValue, TermCapExceeded, TruncationTooLarge
from .multiindex import (
    Index,
    as_index,
    compositions_into,
    count_partitions,
    multinomial,
    order,
    partitions,
)

DEFAULT_TERM_CAP = 10_000_000
TERM_CAP_ENV = "UMFB_TERM_CAP"

MAX_TRUNCATION = 8


@dataclass(frozen=True)
class MomentSequence:
    """A moment lookup a_k (integer k) or a_i (multi-index i), with a_0 = 1.

    ``kind`` selects a closed form, or a stored table:

    * ``unity``            a_k = 1
    * ``cumulant_weights`` a_k = (-1)^(k-1) (k-1)!   (log-series weights)
    * ``reciprocal``       a_k = (-1)^k k!           (reciprocal-series weights)
    * ``alternating``      a_k = (-1)^k
    * ``table``            explicit values, univariate or multi-index keyed
    """

    kind: str
    table: tuple = field(default=())

    @classmethod
    def unity(cls) -> "MomentSequence":
        return cls("unity")

    @classmethod
    def cumulant_weights(cls) -> "MomentSequence":
        return cls("cumulant_weights")

    @classmethod
    def reciprocal(cls) -> "MomentSequence":
        return cls("reciprocal")

    @classmethod
    def alternating(cls) -> "MomentSequence":
        return cls("alternating")

    @classmethod
    def from_values(cls, values) -> "MomentSequence":
        """Univariate table a_1..a_K (a_0 is implicitly 1)."""
        return cls("table", tuple(((k + 1,), Fraction(v)) for k, v in enumerate(values)))

    @classmethod
    def from_table(cls, table) -> "MomentSequence":
        """Multi-index keyed table; the zero index defaults to 1."""
        return cls("table", tuple(sorted((tuple(k), Fraction(v)) for k, v in table.items())))

    def at(self, k):
        """Value at k; k may be an int or a multi-index (then |k| is used for
        the closed-form kinds)."""
        idx = (k,) if isinstance(k, int) else tuple(k)
        total = sum(idx)
        if self.kind == "unity":
            return 1
        if self.kind == "cumulant_weights":
            return 1 if total == 0 else (-1) ** (total - 1) * factorial(total - 1)
        if self.kind == "reciprocal":
            return (-1) ** total * factorial(total)
        if self.kind == "alternating":
            return (-1) ** total
        if total == 0:
            return 1
        for key, value in self.table:
            if key == idx:
                return value
        raise MissingValue(f"moment sequence has no value at {idx}")


@dataclass(frozen=True)
class CompositionSpec:
    """Shape of one composite-derivative computation.

    ``index`` is the derivative order (length m), ``n`` the number of inner
    functions (= outer arity), ``m`` the number of inner variables.  With
    ``inner_mode='shared'`` all inner functions are the same function.
    ``outer=None`` keeps the outer derivatives symbolic.
    """

    index: Index
    n: int
    m: int
    inner_mode: str = "distinct"
    outer: MomentSequence | None = None

    def __post_init__(self):
        object.__setattr__(self, "index", as_index(self.index))
        if len(self.index) != self.m:
            raise ValueError(f"index {self.index} has length != m={self.m}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.inner_mode not in ("distinct", "shared"):
            raise ValueError(f"unknown inner_mode {self.inner_mode!r}")


@lru_cache(maxsize=None)
def _expansion(index: Index) -> tuple:
    """Partition expansion of one power: (weight, length, columns) triples.

    The zero index expands to the single unit triple, mirroring the base case
    of the recursive reference procedure.
    """
    if order(index) == 0:
        return ((1, 0, ()),)
    return tuple((p.coefficient(), p.length, p.columns) for p in partitions(index))


def term_cap(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(TERM_CAP_ENV)
    return int(env) if env else DEFAULT_TERM_CAP


def predict_term_count(index: Index, n: int) -> int:
    """Upper bound on output terms: sum over decompositions of the product of
    per-part partition counts (exact in distinct mode with symbolic outer)."""
    index = as_index(index)

    def pcount(k: Index) -> int:
        return 1 if order(k) == 0 else count_partitions(k)

    total = 0
    for parts in compositions_into(index, n):
        prod_ = 1
        for k in parts:
            prod_ *= pcount(k)
        total += prod_
    return total


def _check_cap(index: Index, n: int, cap: int | None):
    limit = term_cap(cap)
    predicted = predict_term_count(index, n)
    if predicted > limit:
        raise TermCapExceeded(
            f"predicted {predicted} terms exceeds cap {limit} for index {index}, n={n}"
        )


def dot_power_expansion(
    index: Index, outer: MomentSequence | None = None, inner_fn: int = 1
) -> FormulaPoly:
    """Expand one composite power over the partitions of ``index``.

    With a symbolic outer (None) each partition contributes an outer symbol
    of univariate degree equal to the partition length; with a numeric outer
    the sequence value at that length multiplies the coefficient.  Inner
    factors are tagged with ``inner_fn``.
    """
    index = as_index(index)
    m = len(index)
    acc: dict = {}
    for weight, length, cols in _expansion(index):
        coeff = weight
        factors = {("g", inner_fn, col): mult for col, mult in cols}
        if outer is None:
            factors[("f", (length,))] = 1
        else:
            coeff = coeff * outer.at(length)
            if coeff == 0:
                continue
        key = tuple(sorted(factors.items()))
        v = acc.get(key, 0) + coeff
        if v == 0:
            acc.pop(key, None)
        else:
            acc[key] = v
    return FormulaPoly(1, m, acc)


def umfb(spec: CompositionSpec, cap: int | None = None) -> FormulaPoly:
    """The compressed multivariate Faa di Bruno formula for ``spec``.

    Outer powers are collected into a single outer symbol indexed by the
    per-function partition lengths; in shared mode inner function ids
    collapse to 1 before collection.
    """
    return _assemble(spec, bell=False, cap=cap)


def generalized_bell(i: Index, n: int, m: int, cap: int | None = None) -> FormulaPoly:
    """Same expansion as `umfb` with the outer symbol rendered as a monomial
    in the indeterminates x1..xn; substituting xj by the outer moments
    recovers the `umfb` output."""
    spec = CompositionSpec(index=as_index(i), n=n, m=m)
    return _assemble(spec, bell=True, cap=cap)


@lru_cache(maxsize=None)
def _tagged_expansion(index: Index, fn: int) -> tuple:
    """Like `_expansion` but with the inner factors pre-built as sorted
    (symbol, exponent) tuples for function id ``fn``."""
    return tuple(
        (weight, length, tuple(sorted((("g", fn, col), mult) for col, mult in cols)))
        for weight, length, cols in _expansion(index)
    )


def _assemble(spec: CompositionSpec, bell: bool, cap: int | None) -> FormulaPoly:
    i, n = spec.index, spec.n
    shared = spec.inner_mode == "shared"
    _check_cap(i, n, cap)
    acc: dict = {}
    for parts in compositions_into(i, n):
        base = multinomial(i, parts)
        expansions = [
            _tagged_expansion(k, 1 if shared else j)
            for j, k in enumerate(parts, start=1)
        ]
        for combo in product(*expansions):
            coeff = base
            items: tuple = ()
            lengths = []
            for weight, length, factors in combo:
                coeff *= weight
                lengths.append(length)
                items += factors
            if bell:
                extra = tuple(
                    (("x", j), length)
                    for j, length in enumerate(lengths, start=1)
                    if length
                )
                items += extra
            elif spec.outer is None:
                items += ((("f", tuple(lengths)), 1),)
            else:
                coeff = coeff * spec.outer.at(tuple(lengths))
                if coeff == 0:
                    continue
            if shared and n > 1:
                merged: dict = {}
                for sym, exp in items:
                    merged[sym] = merged.get(sym, 0) + exp
                key = tuple(sorted(merged.items()))
            else:
                key = tuple(sorted(items))
            v = acc.get(key, 0) + coeff
            if v == 0:
                acc.pop(key, None)
            else:
                acc[key] = v
    return FormulaPoly(spec.n, spec.m, acc)


def compose_generating_check(
    spec: CompositionSpec, inner: list[MomentSequence], truncation: int
) -> dict:
    """Independent functional check: truncated power-series composition.

    Builds the inner generating series from explicit moment lookups, raises
    them to outer powers and sums with the outer moments, all in exact
    rational arithmetic; returns the moments of the composition for every
    index of total order <= ``truncation``.  Shares no code with the
    partition expansion.
    """
    if truncation > MAX_TRUNCATION:
        raise TruncationTooLarge(f"truncation {truncation} > {MAX_TRUNCATION}")
    if spec.outer is None:
        raise ValueError("a numeric outer sequence is required")
    n, m, cap = spec.n, spec.m, truncation
    if spec.inner_mode == "shared":
        inner = [inner[0]] * n
    if len(inner) != n:
        raise ValueError(f"need {n} inner sequences, got {len(inner)}")

    # u_j = (inner generating series) - 1, truncated
    us = []
    for seq in inner:
        s = series.from_moments(seq.at, m, cap)
        s.pop((0,) * m, None)
        us.append(s)

    # cache u_j^e for e up to the truncation order
    powers = []
    for u in us:
        row = [series.one(m)]
        for _ in range(cap):
            row.append(series.mul(row[-1], u, cap))
        powers.append(row)

    out = series.one(m)
    for j in product(range(cap + 1), repeat=n):
        total = sum(j)
        if total == 0 or total > cap:
            continue
        g = Fraction(spec.outer.at(tuple(j)))
        if g == 0:
            continue
        term = powers[0][j[0]]
        for a in range(1, n):
            term = series.mul(term, powers[a][j[a]], cap)
        jfact = 1
        for e in j:
            jfact *= factorial(e)
        out = series.add(out, series.scale(term, g / jfact))

    return {
        k: series.coefficient_moment(out, k)
        for k in product(range(cap + 1), repeat=m)
        if order(k) <= cap
    }
