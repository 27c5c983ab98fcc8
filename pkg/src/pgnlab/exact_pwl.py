"""Exact rational scalars and continuous piecewise-linear functions.

Every quantity here is a :class:`fractions.Fraction`; nothing is ever
rounded.  A :class:`PiecewiseLinear` stores its knot abscissae and the
ordinates at those knots, and the slopes are derived on demand.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

LEFT = "left"
RIGHT = "right"


class DomainError(ValueError):
    """A point or interval lies outside the domain of a function."""


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused on purpose: they would smuggle rounding into
    exact computations.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def fmt_rational(x: Fraction) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` for integers)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function given by knots and ordinates."""

    knots: tuple
    values: tuple

    def __init__(self, knots: Iterable[RationalLike], values: Iterable[RationalLike]):
        ks = tuple(as_rational(k) for k in knots)
        vs = tuple(as_rational(v) for v in values)
        if len(ks) != len(vs):
            raise ValueError("knots and values must have equal length")
        if len(ks) < 2:
            raise ValueError("a piecewise-linear function needs at least two knots")
        for lo, hi in zip(ks, ks[1:]):
            if not lo < hi:
                raise ValueError("knots must be strictly increasing")
        object.__setattr__(self, "knots", ks)
        object.__setattr__(self, "values", vs)

    @classmethod
    def constant(cls, value: RationalLike, lo: RationalLike, hi: RationalLike) -> "PiecewiseLinear":
        return cls((lo, hi), (value, value))

    @classmethod
    def identity(cls, lo: RationalLike, hi: RationalLike) -> "PiecewiseLinear":
        return cls((lo, hi), (lo, hi))

    @property
    def domain(self) -> tuple:
        return self.knots[0], self.knots[-1]

    def __len__(self) -> int:
        return len(self.knots)

    def __call__(self, q: RationalLike) -> Fraction:
        return pwl_eval(self, q)

    def segment_slopes(self) -> list:
        ks, vs = self.knots, self.values
        return [(vs[i + 1] - vs[i]) / (ks[i + 1] - ks[i]) for i in range(len(ks) - 1)]

    def restrict(self, lo: RationalLike, hi: RationalLike) -> "PiecewiseLinear":
        """Restriction to ``[lo, hi]``, which must sit inside the domain."""
        lo, hi = as_rational(lo), as_rational(hi)
        q0, q1 = self.domain
        if not (q0 <= lo < hi <= q1):
            raise DomainError(f"[{lo}, {hi}] is not a subinterval of [{q0}, {q1}]")
        inner = [k for k in self.knots if lo < k < hi]
        ks = [lo, *inner, hi]
        return PiecewiseLinear(ks, [pwl_eval(self, k) for k in ks])

    def normalize(self) -> "PiecewiseLinear":
        """Drop knots whose neighbours are collinear with them."""
        ks, vs = list(self.knots), list(self.values)
        keep_k, keep_v = [ks[0]], [vs[0]]
        for i in range(1, len(ks) - 1):
            left = (vs[i] - keep_v[-1]) / (ks[i] - keep_k[-1])
            right = (vs[i + 1] - vs[i]) / (ks[i + 1] - ks[i])
            if left != right:
                keep_k.append(ks[i])
                keep_v.append(vs[i])
        keep_k.append(ks[-1])
        keep_v.append(vs[-1])
        return PiecewiseLinear(keep_k, keep_v)

    def equals(self, other: "PiecewiseLinear") -> bool:
        """Pointwise equality, independent of redundant knots."""
        if self.domain != other.domain:
            return False
        union = sorted(set(self.knots) | set(other.knots))
        return all(pwl_eval(self, q) == pwl_eval(other, q) for q in union)

    def concat(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        """Glue ``other`` onto the right end; the shared endpoint must agree."""
        if self.knots[-1] != other.knots[0]:
            raise DomainError("functions do not share an endpoint")
        if self.values[-1] != other.values[0]:
            raise DomainError(
                f"discontinuity at {self.knots[-1]}: {self.values[-1]} != {other.values[0]}"
            )
        return PiecewiseLinear(self.knots + other.knots[1:], self.values + other.values[1:])


def _locate(f: PiecewiseLinear, q: Fraction) -> int:
    """Index i with knots[i] <= q <= knots[i+1]."""
    i = bisect.bisect_right(f.knots, q) - 1
    return min(max(i, 0), len(f.knots) - 2)


def pwl_eval(f: PiecewiseLinear, q: RationalLike) -> Fraction:
    q = as_rational(q)
    q0, q1 = f.domain
    if q < q0 or q > q1:
        raise DomainError(f"{q} outside domain [{q0}, {q1}]")
    i = _locate(f, q)
    k0, k1 = f.knots[i], f.knots[i + 1]
    v0, v1 = f.values[i], f.values[i + 1]
    if q == k0:
        return v0
    if q == k1:
        return v1
    return v0 + (v1 - v0) * (q - k0) / (k1 - k0)


def pwl_slope(f: PiecewiseLinear, q: RationalLike, side: str = RIGHT) -> Fraction:
    """One-sided slope of ``f`` at ``q``."""
    q = as_rational(q)
    q0, q1 = f.domain
    if side == LEFT:
        if not q0 < q <= q1:
            raise DomainError(f"no left slope at {q} on [{q0}, {q1}]")
        i = bisect.bisect_left(f.knots, q) - 1
    elif side == RIGHT:
        if not q0 <= q < q1:
            raise DomainError(f"no right slope at {q} on [{q0}, {q1}]")
        i = bisect.bisect_right(f.knots, q) - 1
    else:
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
    return (f.values[i + 1] - f.values[i]) / (f.knots[i + 1] - f.knots[i])


def pwl_linear_combination(
    coeffs: Sequence[RationalLike], fs: Sequence[PiecewiseLinear]
) -> PiecewiseLinear:
    """Exact ``sum(c_i * f_i)`` on the intersection of the domains."""
    if len(coeffs) != len(fs):
        raise ValueError("coeffs and fs must have the same length")
    if not fs:
        raise ValueError("need at least one function")
    cs = [as_rational(c) for c in coeffs]
    lo = max(f.domain[0] for f in fs)
    hi = min(f.domain[1] for f in fs)
    if not lo < hi:
        raise DomainError("domain intersection has empty interior")
    ks = sorted({lo, hi} | {k for f in fs for k in f.knots if lo < k < hi})
    vs = [sum((c * pwl_eval(f, q) for c, f in zip(cs, fs)), Fraction(0)) for q in ks]
    return PiecewiseLinear(ks, vs)


def merged_knots(fs: Sequence[PiecewiseLinear]) -> list:
    """Sorted union of the knots of ``fs`` (domains assumed equal)."""
    return sorted({k for f in fs for k in f.knots})
