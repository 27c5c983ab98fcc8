"""Target points, parametric bodies and their exact gauge functions.

Every body here has a squared gauge of the form

    g(x)^2 = max(e * |x|^2, w_1 (a_1.x)^2, ..., w_m (a_m.x)^2)

with rational ``e >= 0``, ``w_i > 0`` and rational vectors ``a_i``, so
squared gauges are always exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Optional, Sequence

from ..exact_pwl import as_rational, fmt_rational

C = "C"
K = "K"
KSTAR = "Kstar"
CUBE = "CubeLattice"
KINDS = (C, K, KSTAR, CUBE)


class BodyError(ValueError):
    """Malformed point or body parameters."""


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def rational_root(x: Fraction, n: int) -> Optional[Fraction]:
    """Exact positive n-th root of a positive rational, or None."""
    x = Fraction(x)
    if x <= 0:
        return None

    def iroot(v: int) -> Optional[int]:
        r = round(v ** (1.0 / n)) if v < 2**1000 else int(math.exp(math.log(v) / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == v:
                return cand
        lo, hi = 0, 1 << (v.bit_length() // n + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**n < v:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo**n == v else None

    p, q = iroot(x.numerator), iroot(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def _log_rational(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


@total_ordering
class GaugeValue:
    """A non-negative real known exactly through its rational square."""

    __slots__ = ("sq",)

    def __init__(self, sq):
        sq = as_rational(sq)
        if sq < 0:
            raise ValueError("squared gauge must be non-negative")
        self.sq = sq

    @classmethod
    def of(cls, x) -> "GaugeValue":
        x = as_rational(x)
        if x < 0:
            raise ValueError("gauge values are non-negative")
        return cls(x * x)

    def exact(self) -> Optional[Fraction]:
        """The value as a rational when it is one."""
        return rational_sqrt(self.sq)

    @property
    def is_rational(self) -> bool:
        return self.exact() is not None

    def log(self) -> float:
        if self.sq == 0:
            return -math.inf
        return 0.5 * _log_rational(self.sq)

    def __float__(self) -> float:
        if self.sq == 0:
            return 0.0
        return math.exp(self.log())

    def __mul__(self, other) -> "GaugeValue":
        if isinstance(other, GaugeValue):
            return GaugeValue(self.sq * other.sq)
        other = as_rational(other)
        if other < 0:
            raise ValueError("cannot scale a gauge by a negative number")
        return GaugeValue(self.sq * other * other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaugeValue":
        if isinstance(other, GaugeValue):
            return GaugeValue(self.sq / other.sq)
        other = as_rational(other)
        return GaugeValue(self.sq / (other * other))

    def __eq__(self, other):
        if isinstance(other, GaugeValue):
            return self.sq == other.sq
        try:
            o = as_rational(other)
        except TypeError:
            return NotImplemented
        return o >= 0 and self.sq == o * o

    def __lt__(self, other):
        if isinstance(other, GaugeValue):
            return self.sq < other.sq
        o = as_rational(other)
        return o > 0 and self.sq < o * o

    def __hash__(self):
        return hash(("gauge", self.sq))

    def __str__(self) -> str:
        r = self.exact()
        if r is not None:
            return fmt_rational(r)
        return f"sqrt({fmt_rational(self.sq)})"

    def __repr__(self) -> str:
        return f"GaugeValue({self})"


@dataclass(frozen=True)
class TargetPoint:
    coords: tuple

    def __init__(self, coords: Sequence):
        cs = tuple(as_rational(c) for c in coords)
        if len(cs) < 3:
            raise BodyError("need at least three coordinates (n >= 2)")
        if all(c == 0 for c in cs):
            raise BodyError("target point must be non-zero")
        object.__setattr__(self, "coords", cs)

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def normalized(self) -> bool:
        return self.coords[0] == 1

    def __str__(self) -> str:
        return ",".join(fmt_rational(c) for c in self.coords)


@dataclass(frozen=True)
class SquaredGauge:
    """``max(euclid * |x|^2, w_i * (a_i . x)^2)``."""

    dim: int
    euclid: Fraction
    branches: tuple  # ((w, a), ...)

    @property
    def n_branches(self) -> int:
        return (1 if self.euclid > 0 else 0) + len(self.branches)

    def __call__(self, x: Sequence[int]) -> Fraction:
        best = Fraction(0)
        if self.euclid:
            best = self.euclid * sum(Fraction(v) * v for v in x)
        for w, a in self.branches:
            dot = sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))
            best = max(best, w * dot * dot)
        return best

    def gram(self) -> list:
        """Gram matrix of ``h(x) = euclid |x|^2 + sum w_i (a_i.x)^2``.

        ``g^2 <= h <= n_branches * g^2``.
        """
        d = self.dim
        G = [[self.euclid if i == j else Fraction(0) for j in range(d)] for i in range(d)]
        for w, a in self.branches:
            for i in range(d):
                if a[i] == 0:
                    continue
                for j in range(d):
                    G[i][j] += w * a[i] * a[j]
        return G

    @cached_property
    def integer_form(self) -> tuple:
        """(L, euclid_coeff, [(coeff, int_vector)]) with L * g^2 integral.

        ``L * g(x)^2 = max(E * |x|^2, C_i * (b_i . x)^2)`` for integer x.
        """
        coeffs = []
        for w, a in self.branches:
            den = math.lcm(*(ai.denominator for ai in a))
            b = tuple(int(ai * den) for ai in a)
            coeffs.append((w / (den * den), b))
        dens = [c.denominator for c, _ in coeffs] + [self.euclid.denominator]
        L = math.lcm(*dens)
        E = int(self.euclid * L)
        return L, E, [(int(c * L), b) for c, b in coeffs]


@dataclass(frozen=True)
class GaugeBody:
    kind: str
    point: TargetPoint
    parameter: Fraction
    root: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BodyError(f"unknown body kind {self.kind!r}")
        if not isinstance(self.point, TargetPoint):
            object.__setattr__(self, "point", TargetPoint(self.point))
        param = as_rational(self.parameter)
        if param <= 0:
            raise BodyError("body parameter must be positive")
        object.__setattr__(self, "parameter", param)
        if self.kind == C:
            return
        if not self.point.normalized:
            raise BodyError(f"{self.kind} bodies need xi_0 = 1")
        n = self.point.n
        root = self.root
        if root is None:
            root = rational_root(param, n)
            if root is None:
                raise BodyError(f"N = {param} is not the n-th power of a rational (n = {n})")
        root = as_rational(root)
        if root <= 0 or root**n != param:
            raise BodyError(f"root {root} is not the positive {n}-th root of N = {param}")
        object.__setattr__(self, "root", root)

    @property
    def dim(self) -> int:
        return self.point.dim

    def generator_matrix(self) -> list:
        """Rows v_0..v_n generating the lattice of the CubeLattice body."""
        xi, R, N = self.point.coords, self.root, self.parameter
        d = self.dim
        rows = [[Fraction(1) / N] + [R * x for x in xi[1:]]]
        for j in range(1, d):
            rows.append([Fraction(0)] * d)
            rows[-1][j] = -R
        return rows

    @cached_property
    def squared_gauge(self) -> SquaredGauge:
        xi, d = self.point.coords, self.dim
        P = self.parameter
        e0 = tuple(Fraction(int(i == 0)) for i in range(d))
        if self.kind == C:
            return SquaredGauge(d, Fraction(1), ((P * P, xi),))
        if self.kind == KSTAR:
            return SquaredGauge(d, 1 / (self.root * self.root), ((P * P, xi),))
        if self.kind == K:
            br = [(1 / (P * P), e0)]
            for j in range(1, d):
                a = tuple(xi[j] if i == 0 else Fraction(-int(i == j)) for i in range(d))
                br.append((self.root * self.root, a))
            return SquaredGauge(d, Fraction(0), tuple(br))
        V = self.generator_matrix()
        br = tuple((Fraction(1), tuple(V[i][k] for i in range(d))) for k in range(d))
        return SquaredGauge(d, Fraction(0), br)

    def scaled_lattice_vector(self, x: Sequence[int]) -> list:
        """``sum x_i v_i`` for the CubeLattice generator rows."""
        V = self.generator_matrix()
        return [sum((V[i][k] * x[i] for i in range(self.dim)), Fraction(0)) for k in range(self.dim)]


def gauge_value(body: GaugeBody, x: Sequence[int]) -> GaugeValue:
    if len(x) != body.dim:
        raise BodyError(f"vector has dimension {len(x)}, body has {body.dim}")
    return GaugeValue(body.squared_gauge(x))
