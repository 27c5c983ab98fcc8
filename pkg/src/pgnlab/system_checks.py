"""Axiom validation and asymptotic analysis of generalized systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact_pwl import PiecewiseLinear, as_rational, merged_knots, pwl_eval
from .system_builder import (
    Block,
    GeneralizedSystem,
    GluedTriple,
    GrowthSequence,
    SpecError,
    SystemParams,
    build_block,
    glue_blocks,
)

DEFAULT_TRAJECTORY_SLACK = Fraction(1, 20)
DEFAULT_EPS0 = Fraction(1, 100)


class PreconditionError(ValueError):
    pass


# -- (G1)-(G3) -----------------------------------------------------------------


@dataclass
class Witness:
    axiom: str
    q: Fraction
    description: str


@dataclass
class SlopeGroup:
    lo: Fraction
    hi: Fraction
    start: Optional[int]  # 1-based, None when no coherent group exists
    end: Optional[int]


@dataclass
class AxiomReport:
    g1_ok: bool = True
    g2_ok: bool = True
    g3_ok: bool = True
    witnesses: list = field(default_factory=list)
    groups: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.g1_ok and self.g2_ok and self.g3_ok

    def fail(self, axiom: str, q: Fraction, description: str) -> None:
        setattr(self, f"{axiom.lower()}_ok", False)
        self.witnesses.append(Witness(axiom, q, description))


def _check_g1(report: AxiomReport, q: Fraction, vals: Sequence[Fraction]) -> None:
    if vals[0] < 0:
        report.fail("G1", q, f"P_1 = {vals[0]} is negative")
    for j in range(len(vals) - 1):
        if vals[j] > vals[j + 1]:
            report.fail("G1", q, f"P_{j + 1} = {vals[j]} > P_{j + 2} = {vals[j + 1]}")
    total = sum(vals, Fraction(0))
    if total != q:
        report.fail("G1", q, f"sum of components is {total}, not q")


def _interval_group(report, lo, hi, left_vals, right_vals) -> SlopeGroup:
    width = hi - lo
    slopes = [(b - a) / width for a, b in zip(left_vals, right_vals)]
    moving = [j for j, s in enumerate(slopes) if s != 0]
    mid = (lo + hi) / 2
    if not moving:
        report.fail("G2", mid, "no component moves on this interval")
        return SlopeGroup(lo, hi, None, None)
    first, last = moving[0], moving[-1]
    size = last - first + 1
    bad = []
    if len(moving) != size:
        bad.append(f"moving components {[j + 1 for j in moving]} are not contiguous")
    expected = Fraction(1, size)
    for j in range(first, last + 1):
        if slopes[j] != expected:
            bad.append(f"P_{j + 1} has slope {slopes[j]}, expected {expected}")
    for j in range(first + 1, last + 1):
        if left_vals[j] != left_vals[first] or right_vals[j] != right_vals[first]:
            bad.append(f"P_{first + 1} and P_{j + 1} do not coincide")
    for msg in bad:
        report.fail("G2", mid, msg)
    if bad:
        return SlopeGroup(lo, hi, None, None)
    return SlopeGroup(lo, hi, first + 1, last + 1)


def validate_gsystem(P: GeneralizedSystem) -> AxiomReport:
    comps = P.components
    knots = merged_knots(comps)
    if len(knots) < 2:
        raise PreconditionError("system has no knot interval")
    values = [[pwl_eval(f, q) for f in comps] for q in knots]
    report = AxiomReport()
    for q, vals in zip(knots, values):
        _check_g1(report, q, vals)
    for i in range(len(knots) - 1):
        lo, hi = knots[i], knots[i + 1]
        mid = (lo + hi) / 2
        _check_g1(report, mid, [(a + b) / 2 for a, b in zip(values[i], values[i + 1])])
        report.groups.append(_interval_group(report, lo, hi, values[i], values[i + 1]))
    for i in range(1, len(knots) - 1):
        left, right = report.groups[i - 1], report.groups[i]
        if left.start is None or right.start is None:
            continue
        r_lo, s_hi = left.start, right.end
        if r_lo <= s_hi:
            vals = values[i]
            run = vals[r_lo - 1 : s_hi]
            if any(v != run[0] for v in run):
                report.fail(
                    "G3",
                    knots[i],
                    f"P_{r_lo}..P_{s_hi} should coincide at the junction, got {[str(v) for v in run]}",
                )
    report.witnesses.sort(key=lambda w: (w.axiom, w.q))
    return report


# -- extremal ratios -------------------------------------------------------------


@dataclass
class BlockExtrema:
    max_a_ratio: Fraction
    argmax_q: Fraction
    min_c_ratio: Fraction
    argmin_q: Fraction


def block_extrema(block: Block) -> BlockExtrema:
    """``max A(q)/q`` and ``min C(q)/q`` over the block, in closed form."""
    sp = block.spec
    if not sp.b / sp.a < sp.c / sp.b:
        raise PreconditionError(
            f"extremal ratios need b/a < c/b, got b/a = {sp.b / sp.a}, c/b = {sp.c / sp.b}"
        )
    return BlockExtrema(sp.a / block.r, block.r, sp.b / block.s, block.s)


# -- asymptotics -------------------------------------------------------------------


@dataclass
class AsymptoticRow:
    m: int
    r: Fraction
    s: Fraction
    a_m: Fraction
    a_next: Fraction
    max_a_ratio: Fraction
    min_c_ratio: Fraction
    gap_a: Fraction
    gap_c: Fraction


@dataclass
class AsymptoticReport:
    rows: list
    slopes: tuple
    limsup_a_target: Fraction
    liminf_c_target: Fraction
    theorem_target: Optional[Fraction]
    target_matches: Optional[bool]


def liminf_c_target(beta: Fraction, gamma: Fraction) -> Fraction:
    return beta * gamma / (beta + gamma)


def _triple_of(P) -> tuple:
    if isinstance(P, GluedTriple):
        return P.A, P.C, P.slopes, P.registry
    return P.components[0], P.components[-1], P.slopes, P.registry


def asymptotic_report(P, n: Optional[int] = None, k: Optional[int] = None) -> AsymptoticReport:
    """Per-block ``a_m/r_m`` and ``a_{m+1}/s_m`` with their limits.

    Works on a system or a glued triple: ``a_m = A(r_m)`` and
    ``a_{m+1} = C(r_m)``, read back from the functions themselves.
    """
    A, C, slopes, registry = _triple_of(P)
    if not registry:
        raise PreconditionError("system has an empty block registry")
    if slopes is None:
        raise PreconditionError("system does not record its slopes")
    if isinstance(P, GeneralizedSystem):
        n = P.n if n is None else n
        k = P.k if k is None else k
    _, beta, gamma = slopes
    target = liminf_c_target(beta, gamma)
    rows = []
    for rec in registry:
        a_m = pwl_eval(A, rec.r)
        a_next = pwl_eval(C, rec.r)
        ra = a_m / rec.r
        rc = a_next / rec.s
        rows.append(AsymptoticRow(rec.m, rec.r, rec.s, a_m, a_next, ra, rc, ra, target - rc))
    theorem = None
    matches = None
    if n is not None and k is not None:
        theorem = Fraction(1, n - k + 2)
        if tuple(slopes) == SystemParams.default_slopes(n, k):
            matches = target == theorem
    return AsymptoticReport(rows, tuple(slopes), Fraction(0), target, theorem, matches)


# -- theta separation ----------------------------------------------------------------


@dataclass
class SeparationRow:
    m: int
    r: Fraction
    r_prime: Fraction
    t: Fraction
    scaled_ok: bool
    sandwich: bool
    amplitude: Fraction
    amplitude_ok: bool


@dataclass
class SeparationReport:
    theta: Fraction
    theta_prime: Fraction
    rows: list
    holds_from: Optional[int]

    @property
    def ok(self) -> bool:
        return self.holds_from is not None and all(r.scaled_ok and r.amplitude_ok for r in self.rows)


def separation_check(theta, theta_prime, m_range: Sequence[int], n: int, k: int) -> SeparationReport:
    th, thp = as_rational(theta), as_rational(theta_prime)
    if not 0 < th < thp:
        raise PreconditionError(f"need 0 < theta < theta', got {th}, {thp}")
    ms = list(m_range)
    if not ms:
        raise PreconditionError("empty m range")
    alpha, beta, gamma = SystemParams.default_slopes(n, k)
    lo, hi = min(ms), max(ms)
    seq = GrowthSequence.theta_form(th)
    seq_p = GrowthSequence.theta_form(thp)
    reg = {rec.m: rec for rec in glue_blocks(seq, lo, hi, (alpha, beta, gamma)).registry}
    reg_p = {rec.m: rec for rec in glue_blocks(seq_p, lo, hi, (alpha, beta, gamma)).registry}
    rows = []
    for m in range(lo, hi + 1):
        r, t = reg[m].r, reg[m].t
        rp = reg_p[m].r
        amp = abs(seq_p.value(m) - seq.value(m))
        expected_amp = (thp - th) * (Fraction(2) ** (m**3))
        rows.append(
            SeparationRow(m, r, rp, t, rp == thp / th * r, r < rp < t, amp, amp == expected_amp)
        )
    holds_from = None
    for row in reversed(rows):
        if not row.sandwich:
            break
        holds_from = row.m
    return SeparationReport(th, thp, rows, holds_from)


# -- parametric exponents ------------------------------------------------------------


@dataclass
class PhiEstimates:
    """Window minima/maxima of ``L_j(q)/q`` (or ``P_j(q)/q``), j = 1..n+1."""

    under: list
    over: list
    q_lo: object
    q_hi: object
    exact: bool = False

    @property
    def size(self) -> int:
        return len(self.under)


def system_phi_estimates(P: GeneralizedSystem, q_lo=None, q_hi=None) -> PhiEstimates:
    """Exact window extremes of ``P_j(q)/q``.

    On each knot interval ``P_j(q)/q = slope + const/q`` is monotone, so the
    extremes over ``[q_lo, q_hi]`` are attained at knots or window ends.
    """
    d_lo, d_hi = P.domain
    lo = d_lo if q_lo is None else as_rational(q_lo)
    hi = d_hi if q_hi is None else as_rational(q_hi)
    if not (d_lo <= lo < hi <= d_hi) or lo <= 0:
        raise PreconditionError(f"window [{lo}, {hi}] not inside ({0}, {d_hi}]")
    pts = [lo] + [q for q in merged_knots(P.components) if lo < q < hi] + [hi]
    ratios = [[pwl_eval(f, q) / q for q in pts] for f in P.components]
    return PhiEstimates([min(r) for r in ratios], [max(r) for r in ratios], lo, hi, exact=True)


@dataclass
class Comparison:
    name: str
    passed: bool
    observed: object
    bound: object


@dataclass
class PhiCheck:
    comparisons: list
    chain_applied: bool

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.comparisons)


def phi_inequality_check(est: PhiEstimates, n: int, k: Optional[int] = None, slack=None, eps0=None) -> PhiCheck:
    """Compare ``under_{j+1} <= over_j + slack`` and, when ``over_{k-1}`` is
    negligible, the chain ``(n-k+2) over_k <= 1`` and
    ``under_{k+1} <= 1/(n-k+2)``.
    """
    if est.size != n + 1:
        raise PreconditionError(f"estimates cover {est.size} indices, expected {n + 1}")
    if slack is None:
        slack = Fraction(0) if est.exact else DEFAULT_TRAJECTORY_SLACK
    eps0 = DEFAULT_EPS0 if eps0 is None else eps0
    out = []
    for j in range(n):
        bound = est.over[j] + slack
        out.append(Comparison(f"under_{j + 2} <= over_{j + 1}", est.under[j + 1] <= bound, est.under[j + 1], bound))
    chain = False
    if k is not None and est.over[k - 2] <= eps0:
        chain = True
        h = n - k + 2
        out.append(Comparison(f"{h}*over_{k} <= 1", h * est.over[k - 1] <= 1 + slack, h * est.over[k - 1], 1 + slack))
        tb = Fraction(1, h) + slack
        out.append(Comparison(f"under_{k + 1} <= 1/{h}", est.under[k] <= tb, est.under[k], tb))
    return PhiCheck(out, chain)
