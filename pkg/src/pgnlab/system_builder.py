"""Blocks, growth sequences and generalized (n+1)-systems.

A *block* is the triple ``(A, B, C)`` on ``[r, u]`` determined by
``a < b < c`` and three slopes.  Consecutive blocks built from a growth
sequence ``a_m`` glue into one triple on ``[r_m0, r_{m1+1}]``; with the
slopes ``1/(k-1), 1, 1/(n+1-k)`` that triple expands into an
``(n+1)``-tuple of components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .exact_pwl import PiecewiseLinear, RationalLike, as_rational, pwl_eval


class SpecError(ValueError):
    """Block or system parameters violate their preconditions."""


class WindowError(ValueError):
    """A request reaches outside the available sequence window."""


class GluingError(RuntimeError):
    """Adjacent blocks disagree at their shared endpoint."""


@dataclass(frozen=True)
class BlockSpec:
    a: Fraction
    b: Fraction
    c: Fraction
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "alpha", "beta", "gamma"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not (0 < self.a < self.b < self.c):
            raise SpecError(f"need 0 < a < b < c, got a={self.a}, b={self.b}, c={self.c}")
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise SpecError("slopes alpha, beta, gamma must be positive")

    @classmethod
    def of(cls, *vals: RationalLike) -> "BlockSpec":
        return cls(*(as_rational(v) for v in vals))


def block_breakpoints(spec: BlockSpec) -> tuple:
    a, b, c = spec.a, spec.b, spec.c
    ia, ib, ig = 1 / spec.alpha, 1 / spec.beta, 1 / spec.gamma
    r = a * ia + a * ib + b * ig
    s = a * ia + b * ib + b * ig
    t = a * ia + b * ib + c * ig
    u = b * ia + b * ib + c * ig
    return r, s, t, u


@dataclass(frozen=True)
class Block:
    spec: BlockSpec
    r: Fraction
    s: Fraction
    t: Fraction
    u: Fraction
    A: PiecewiseLinear
    B: PiecewiseLinear
    C: PiecewiseLinear

    @property
    def breakpoints(self) -> tuple:
        return self.r, self.s, self.t, self.u

    def triple_at(self, q: RationalLike) -> tuple:
        return pwl_eval(self.A, q), pwl_eval(self.B, q), pwl_eval(self.C, q)


def build_block(spec: BlockSpec) -> Block:
    r, s, t, u = block_breakpoints(spec)
    a, b, c = spec.a, spec.b, spec.c
    A = PiecewiseLinear((r, t, u), (a, a, b))
    B = PiecewiseLinear((r, s, u), (a, b, b))
    C = PiecewiseLinear((r, s, t, u), (b, b, c, c))
    return Block(spec, r, s, t, u, A, B, C)


# -- growth sequences ------------------------------------------------------


def _pow2(e: int) -> Fraction:
    return Fraction(2**e) if e >= 0 else Fraction(1, 2 ** (-e))


@dataclass(frozen=True)
class GrowthSequence:
    """Either ``a_m = theta * 2**(m**3)`` or an explicit window of values.

    For the theta form the window bounds are optional; ``None`` means the
    sequence is available for every integer ``m``.
    """

    theta: Optional[Fraction] = None
    explicit: Optional[Mapping[int, Fraction]] = None
    m0: Optional[int] = None
    m1: Optional[int] = None

    def __post_init__(self):
        if (self.theta is None) == (self.explicit is None):
            raise SpecError("give exactly one of theta or explicit values")
        if self.theta is not None:
            th = as_rational(self.theta)
            if th <= 0:
                raise SpecError("theta must be positive")
            object.__setattr__(self, "theta", th)
        else:
            vals = {int(m): as_rational(v) for m, v in self.explicit.items()}
            if not vals:
                raise SpecError("explicit sequence is empty")
            ms = sorted(vals)
            if ms != list(range(ms[0], ms[-1] + 1)):
                raise SpecError("explicit sequence must cover a contiguous range of m")
            if any(v <= 0 for v in vals.values()):
                raise SpecError("sequence terms must be positive")
            object.__setattr__(self, "explicit", vals)
            object.__setattr__(self, "m0", ms[0])
            object.__setattr__(self, "m1", ms[-1])

    @classmethod
    def theta_form(cls, theta: RationalLike, m0: Optional[int] = None, m1: Optional[int] = None):
        return cls(theta=as_rational(theta), m0=m0, m1=m1)

    @classmethod
    def from_values(cls, values: Sequence[RationalLike], start: int = 0):
        return cls(explicit={start + i: as_rational(v) for i, v in enumerate(values)})

    @property
    def is_theta(self) -> bool:
        return self.theta is not None

    def covers(self, m: int) -> bool:
        return (self.m0 is None or m >= self.m0) and (self.m1 is None or m <= self.m1)

    def value(self, m: int) -> Fraction:
        if not self.covers(m):
            raise WindowError(f"m={m} outside window [{self.m0}, {self.m1}]")
        if self.theta is not None:
            return self.theta * _pow2(m**3)
        return self.explicit[m]


def sequence_values(seq: GrowthSequence, m0: int, m1: int) -> list:
    if m1 < m0:
        raise WindowError("empty range")
    return [seq.value(m) for m in range(m0, m1 + 1)]


@dataclass
class DeltaReport:
    """Outcome of a Delta-membership check.

    ``ok`` covers the ratio conditions on the checked window.  For the theta
    form ``holds_from`` is the least m from which the ratio conditions hold
    for every larger m, and ``limits_certified`` records the two limit
    conditions proved symbolically.
    """

    ok: bool
    window: tuple
    first_violation: Optional[int] = None
    reason: str = ""
    limits_certified: bool = False
    holds_from: Optional[int] = None
    globally_ok: Optional[bool] = None


def theta_ratio_exponent(m: int) -> int:
    """``log2(a_{m+1}/a_m)`` for the theta form."""
    return 3 * m * m + 3 * m + 1


def check_delta_window(seq: GrowthSequence, m0: Optional[int] = None, m1: Optional[int] = None) -> DeltaReport:
    lo = seq.m0 if m0 is None else m0
    hi = seq.m1 if m1 is None else m1
    if seq.is_theta:
        lo = 0 if lo is None else lo
        hi = lo + 4 if hi is None else hi
    if hi - lo < 2:
        raise WindowError("need at least three terms")
    vals = sequence_values(seq, lo, hi)
    first, reason = None, ""
    for i in range(len(vals) - 2):
        r0 = vals[i + 1] / vals[i]
        r1 = vals[i + 2] / vals[i + 1]
        if not r0 > 1:
            first, reason = lo + i, f"a_{{m+1}}/a_m = {r0} is not > 1"
            break
        if not r0 < r1:
            first, reason = lo + i, f"ratios {r0}, {r1} are not strictly increasing"
            break
    report = DeltaReport(first is None, (lo, hi), first, reason)
    if seq.is_theta:
        # ratio 2**e(m) with e(m) = 3m^2+3m+1 >= 1, and e(m+1) - e(m) = 6(m+1):
        # increasing exactly for m >= 0, flat between m=-1 and m=0, decreasing before.
        # a_m -> 0 as m -> -oo and e(m) -> oo as m -> oo, so both limits hold.
        report.limits_certified = True
        report.holds_from = 0
        report.globally_ok = False
    return report


# -- systems -----------------------------------------------------------------


@dataclass(frozen=True)
class SystemParams:
    n: int
    k: int
    sequence: GrowthSequence
    m0: int
    m1: int
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    gamma: Optional[Fraction] = None

    def __post_init__(self):
        if self.n < 2:
            raise SpecError(f"n must be >= 2, got {self.n}")
        if not 2 <= self.k <= self.n:
            raise SpecError(f"k must satisfy 2 <= k <= n, got k={self.k}, n={self.n}")
        if self.m1 < self.m0:
            raise SpecError("block range is empty")
        defaults = self.default_slopes(self.n, self.k)
        for name, dflt in zip(("alpha", "beta", "gamma"), defaults):
            v = getattr(self, name)
            v = dflt if v is None else as_rational(v)
            if v <= 0:
                raise SpecError(f"{name} must be positive")
            object.__setattr__(self, name, v)

    @staticmethod
    def default_slopes(n: int, k: int) -> tuple:
        return Fraction(1, k - 1), Fraction(1), Fraction(1, n + 1 - k)

    @property
    def slopes(self) -> tuple:
        return self.alpha, self.beta, self.gamma

    @property
    def expandable(self) -> bool:
        """True when 1/alpha, 1/beta, 1/gamma are k-1, 1, n+1-k."""
        return self.slopes == self.default_slopes(self.n, self.k)


@dataclass(frozen=True)
class BlockRecord:
    m: int
    r: Fraction
    s: Fraction
    t: Fraction


@dataclass(frozen=True)
class GluedTriple:
    """``(A, B, C)`` glued over a window of blocks, before expansion."""

    A: PiecewiseLinear
    B: PiecewiseLinear
    C: PiecewiseLinear
    slopes: tuple
    registry: tuple
    end: Fraction

    @property
    def domain(self) -> tuple:
        return self.A.domain


@dataclass(frozen=True)
class GeneralizedSystem:
    n: int
    k: Optional[int]
    slopes: Optional[tuple]
    components: tuple
    registry: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != self.n + 1:
            raise SpecError(f"expected {self.n + 1} components, got {len(comps)}")
        dom = comps[0].domain
        if any(c.domain != dom for c in comps):
            raise SpecError("components must share one domain")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "registry", tuple(self.registry))

    @property
    def n_plus_1(self) -> int:
        return self.n + 1

    @property
    def domain(self) -> tuple:
        return self.components[0].domain

    def at(self, q: RationalLike) -> tuple:
        return tuple(pwl_eval(c, q) for c in self.components)

    def replace_component(self, j: int, f: PiecewiseLinear) -> "GeneralizedSystem":
        comps = list(self.components)
        comps[j] = f
        return GeneralizedSystem(self.n, self.k, self.slopes, tuple(comps), self.registry)


def glue_blocks(seq: GrowthSequence, m0: int, m1: int, slopes: Sequence[Fraction]) -> GluedTriple:
    for m in (m0, m1 + 2):
        if not seq.covers(m):
            raise WindowError(f"sequence window must cover [{m0}, {m1 + 2}]")
    alpha, beta, gamma = slopes
    vals = {m: seq.value(m) for m in range(m0, m1 + 3)}
    A = B = C = None
    registry = []
    prev = None
    for m in range(m0, m1 + 1):
        blk = build_block(BlockSpec(vals[m], vals[m + 1], vals[m + 2], alpha, beta, gamma))
        if prev is not None:
            if prev.u != blk.r:
                raise GluingError(f"u_{m - 1} = {prev.u} != r_{m} = {blk.r}")
            if prev.triple_at(prev.u) != blk.triple_at(blk.r):
                raise GluingError(f"triples disagree at r_{m} = {blk.r}")
            A, B, C = A.concat(blk.A), B.concat(blk.B), C.concat(blk.C)
        else:
            A, B, C = blk.A, blk.B, blk.C
        registry.append(BlockRecord(m, blk.r, blk.s, blk.t))
        prev = blk
    return GluedTriple(A, B, C, tuple(slopes), tuple(registry), prev.u)


def expand_triple(triple: GluedTriple, n: int, k: int) -> GeneralizedSystem:
    comps = [triple.A] * (k - 1) + [triple.B] + [triple.C] * (n + 1 - k)
    return GeneralizedSystem(n, k, triple.slopes, tuple(comps), triple.registry)


def build_system(params: SystemParams):
    """Glue blocks ``m0..m1`` and expand to ``n+1`` components.

    Returns a :class:`GluedTriple` instead when slope overrides make the
    expansion meaningless.
    """
    triple = glue_blocks(params.sequence, params.m0, params.m1, params.slopes)
    if not params.expandable:
        return triple
    return expand_triple(triple, params.n, params.k)
