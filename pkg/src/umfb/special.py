"""Moment/cumulant conversions, compound-Poisson moments, Laplace-transform
derivative signs and multivariate Hermite polynomials.

Everything here is a numeric evaluation of the partition expansion with a
particular outer weight sequence, so the heavy lifting stays in one place.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod

from .errors import DimensionMismatch, MissingValue, SingularSigma
from .fdbcore import MomentSequence
from .multiindex import Index, as_index, order, partitions

FLOAT_PIVOT_TOL = 1e-12


@dataclass
class MomentTable:
    """Exact moments (or cumulants) of an n-dimensional sequence, complete up
    to total order K; the zero index is implicitly 1."""

    n: int
    values: dict

    def __post_init__(self):
        self.values = {as_index(k): v for k, v in self.values.items()}
        for k in self.values:
            if len(k) != self.n:
                raise DimensionMismatch(f"index {k} has length != n={self.n}")

    def value(self, i: Index):
        i = as_index(i)
        if order(i) == 0:
            return Fraction(1)
        try:
            return self.values[i]
        except KeyError:
            raise MissingValue(f"moment table has no value at {i}") from None

    def max_order(self) -> int:
        return max((order(k) for k in self.values), default=0)

    def to_json(self) -> str:
        items = [
            {"index": list(k), "value": _rat_str(v)}
            for k, v in sorted(self.values.items())
        ]
        return json.dumps(
            {"n": self.n, "K": self.max_order(), "values": items},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "MomentTable":
        data = json.loads(text)
        return cls(
            n=data["n"],
            values={tuple(e["index"]): Fraction(e["value"]) for e in data["values"]},
        )


def _partition_sum(table_value, i: Index, outer_weight):
    """sum over partitions of i of weight * outer_weight(length) * product of
    table values at the columns."""
    i = as_index(i)
    if order(i) == 0:
        return Fraction(1)
    total = Fraction(0)
    for p in partitions(i):
        w = outer_weight(p.length)
        if w == 0:
            continue
        val = w * p.coefficient()
        for col, mult in p.columns:
            val *= table_value(col) ** mult
        total += val
    return total


def moments_to_cumulants(mom: MomentTable, i: Index):
    """Cumulant at i from raw moments (log-series partition weights)."""
    weights = MomentSequence.cumulant_weights()
    return _partition_sum(mom.value, i, weights.at)


def cumulants_to_moments(cum: MomentTable, i: Index):
    """Raw moment at i from cumulants (unit partition weights)."""
    return _partition_sum(cum.value, i, lambda k: 1)


def compound_poisson_moments(alpha: MomentSequence, mu: MomentTable, i: Index):
    """Moment at i of a random sum of iid vectors with moments ``mu``, the
    summand count being Poisson with randomized rate of moments ``alpha``."""
    return _partition_sum(mu.value, i, alpha.at)


def laplace_derivative_sign(mom: MomentTable, i: Index):
    """Coefficient at i of the moment generating function at negated
    arguments: (-1)^|i| times the moment."""
    i = as_index(i)
    return (-1) ** order(i) * mom.value(i)


def reciprocal_series_moment(mom: MomentTable, i: Index):
    """Coefficient at i (times i!) of the reciprocal of the moment generating
    function, via the partition expansion with weights (-1)^k k!."""
    weights = MomentSequence.reciprocal()
    return _partition_sum(mom.value, i, weights.at)


# -- symmetric matrices -----------------------------------------------------


@dataclass
class SymmetricMatrix:
    """A symmetric matrix with exact rational or float entries."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(e for e in r) for r in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix is not square")
        for a in range(n):
            for b in range(a):
                if rows[a][b] != rows[b][a]:
                    raise ValueError("matrix is not symmetric")
        self.rows = rows

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def exact(self) -> bool:
        return not any(isinstance(e, float) for r in self.rows for e in r)

    def inverse(self) -> "SymmetricMatrix":
        return SymmetricMatrix(_invert(self.rows, self.exact))

    def entry_at(self, col: Index):
        """Entry selected by an order-2 multi-index: (a,b) for e_a + e_b."""
        pos = [a for a, e in enumerate(col) for _ in range(e)]
        if len(pos) != 2:
            raise ValueError(f"index {col} does not have total order 2")
        return self.rows[pos[0]][pos[1]]


def _invert(rows, exact: bool):
    n = len(rows)
    if exact:
        aug = [[Fraction(e) for e in r] + [Fraction(int(a == b)) for b in range(n)]
               for a, r in enumerate(rows)]
    else:
        aug = [[float(e) for e in r] + [float(a == b) for b in range(n)]
               for a, r in enumerate(rows)]
    scale = max(abs(e) for r in rows for e in r) or 1
    for c in range(n):
        pivot_row = max(range(c, n), key=lambda r: abs(aug[r][c]))
        pivot = aug[pivot_row][c]
        if (exact and pivot == 0) or (not exact and abs(pivot) <= FLOAT_PIVOT_TOL * scale):
            raise SingularSigma(f"pivot {pivot} below tolerance in column {c}")
        aug[c], aug[pivot_row] = aug[pivot_row], aug[c]
        aug[c] = [e / pivot for e in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [e - f * p for e, p in zip(aug[r], aug[c])]
    return tuple(tuple(r[n:]) for r in aug)


def _matvec(x, mat: SymmetricMatrix):
    n = mat.dimension
    if len(x) != n:
        raise DimensionMismatch(f"vector length {len(x)} != matrix dimension {n}")
    return tuple(sum(x[a] * mat.rows[a][b] for a in range(n)) for b in range(n))


# -- Hermite polynomials ----------------------------------------------------


def _gaussian_power(j: Index, quad: SymmetricMatrix):
    """Value of the centered-part power at j: partitions with all columns of
    order 2, weighted by (-1)^length and the matching quadratic-form entries."""
    j = as_index(j)
    if order(j) == 0:
        return Fraction(1) if quad.exact else 1.0
    total = 0
    for p in partitions(j):
        val = (-1) ** p.length * p.coefficient()
        ok = True
        for col, mult in p.columns:
            if order(col) != 2:
                ok = False
                break
            val *= quad.entry_at(col) ** mult
        if ok:
            total += val
    return total


def hermite(i: Index, sigma: SymmetricMatrix, x, scaled: str = "H"):
    """Multivariate Hermite polynomial value at x.

    ``scaled='H'`` uses the inverse covariance both as the quadratic form and
    in the shift x*Sigma^-1; ``scaled='H-tilde'`` (the orthogonal variant)
    uses the covariance itself with shift x.
    """
    i = as_index(i)
    if len(i) != sigma.dimension:
        raise DimensionMismatch(f"index {i} vs matrix dimension {sigma.dimension}")
    if scaled == "H":
        quad = sigma.inverse()
        shift = _matvec(x, quad)
    elif scaled == "H-tilde":
        quad = sigma
        shift = tuple(x)
    else:
        raise ValueError(f"unknown variant {scaled!r}")
    total = 0
    for k in _subindices(i):
        binom = prod(comb(a, b) for a, b in zip(i, k))
        rest = tuple(a - b for a, b in zip(i, k))
        shift_pow = prod(s**e for s, e in zip(shift, k) if e)
        total += binom * shift_pow * _gaussian_power(rest, quad)
    return total


def hermite_via_bell(i: Index, sigma: SymmetricMatrix, x):
    """The same polynomial computed as a single partition sum over a shifted
    quadratic moment sequence (order-1 moments x*Sigma^-1, order-2 moments
    Sigma^-1); must agree with `hermite(..., scaled='H')` exactly."""
    i = as_index(i)
    if len(i) != sigma.dimension:
        raise DimensionMismatch(f"index {i} vs matrix dimension {sigma.dimension}")
    if order(i) == 0:
        return Fraction(1) if sigma.exact else 1.0
    inv = sigma.inverse()
    shift = _matvec(x, inv)

    def moment(col: Index):
        d = order(col)
        if d == 1:
            return shift[col.index(1)]
        if d == 2:
            return inv.entry_at(col)
        return 0

    total = 0
    for p in partitions(i):
        val = (-1) ** p.length * p.coefficient()
        for col, mult in p.columns:
            mv = moment(col)
            if mv == 0:
                val = 0
                break
            val *= mv**mult
        total += val
    return (-1) ** order(i) * total


def _subindices(i: Index):
    from itertools import product as iproduct

    return iproduct(*(range(e + 1) for e in i))


def _rat_str(v) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"
