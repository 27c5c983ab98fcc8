"""Trajectories ``q -> (L_1(q), ..., L_{n+1}(q))`` of the bodies C(Q)."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..exact_pwl import as_rational
from ..system_checks import PhiEstimates
from .bodies import C, GaugeBody, TargetPoint
from .enumeration import ResourceLimitError
from .minima import successive_minima


class TrajectoryError(ValueError):
    pass


@dataclass
class TrajectoryRow:
    Q: Fraction
    q: float
    L: list
    defect: float
    lambdas_sq: tuple


@dataclass
class Trajectory:
    point: TargetPoint
    rows: list = field(default_factory=list)
    kind: str = C
    aborted_at: Optional[Fraction] = None
    abort_reason: str = ""

    @property
    def complete(self) -> bool:
        return self.aborted_at is None

    @property
    def n(self) -> int:
        return self.point.n


def _log(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def _minima_at(pt, Q, ceiling):
    try:
        return successive_minima(GaugeBody(C, pt, Q), ceiling).lambdas_sq
    except ResourceLimitError as exc:
        return exc


def trace_trajectory(xi, Q_grid: Sequence, ceiling=None, workers: int = 1) -> Trajectory:
    """Exact minima of C_xi(Q) for each Q, converted to logs for reporting.

    Grid points are independent and may be spread over ``workers``
    processes; rows always come back in grid order.  A resource abort stops
    the trace at that grid point, keeping earlier rows and flagging the
    trajectory.
    """
    pt = xi if isinstance(xi, TargetPoint) else TargetPoint(xi)
    grid = [as_rational(Q) for Q in Q_grid]
    if not grid:
        raise TrajectoryError("empty Q grid")
    for a, b in zip(grid, grid[1:]):
        if not a < b:
            raise TrajectoryError("Q grid must be strictly increasing")
    if grid[0] < 1:
        raise TrajectoryError("Q values must be >= 1")
    traj = Trajectory(pt)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_minima_at, [pt] * len(grid), grid, [ceiling] * len(grid)))
    else:
        results = (_minima_at(pt, Q, ceiling) for Q in grid)
    for Q, lam_sq in zip(grid, results):
        if isinstance(lam_sq, ResourceLimitError):
            traj.aborted_at = Q
            traj.abort_reason = str(lam_sq)
            break
        L = [0.5 * _log(s) for s in lam_sq]
        q = _log(Q)
        traj.rows.append(TrajectoryRow(Q, q, L, q - sum(L), lam_sq))
    return traj


def precision_horizon(xi) -> float:
    """``ln D`` for the common denominator D of ``xi / xi_0``.

    Beyond roughly this q the trajectory follows the rational point itself
    (one minimum grows like Q), so exponent estimates of an irrational
    target are only meaningful for tail windows starting below it.  Points
    with ``xi_0 = 0`` get horizon 0.
    """
    pt = xi if isinstance(xi, TargetPoint) else TargetPoint(xi)
    x0 = pt.coords[0]
    if x0 == 0:
        return 0.0
    D = 1
    for c in pt.coords[1:]:
        D = math.lcm(D, (c / x0).denominator)
    return math.log(D)


def phi_window_estimates(traj: Trajectory, tail_fraction=Fraction(1, 2)) -> PhiEstimates:
    """Min and max of ``L_j(q)/q`` over the last ``tail_fraction`` of rows."""
    frac = as_rational(tail_fraction)
    if not 0 < frac <= 1:
        raise TrajectoryError("tail fraction must lie in (0, 1]")
    rows = [r for r in traj.rows if r.q > 0]
    take = math.ceil(frac * len(rows))
    tail = rows[len(rows) - take :] if take else []
    if len(tail) < 2:
        raise TrajectoryError("tail window needs at least two rows with q > 0")
    d = len(tail[0].L)
    under = [min(r.L[j] / r.q for r in tail) for j in range(d)]
    over = [max(r.L[j] / r.q for r in tail) for j in range(d)]
    return PhiEstimates(under, over, tail[0].q, tail[-1].q, exact=False)


@dataclass
class DefectReport:
    minimum: float
    maximum: float
    range: float
    slope: float
    rows: int


def minkowski_defect_report(traj: Trajectory) -> DefectReport:
    if len(traj.rows) < 3:
        raise TrajectoryError("defect report needs at least three rows")
    q = np.array([r.q for r in traj.rows])
    dfc = np.array([r.defect for r in traj.rows])
    slope = float(np.polyfit(q, dfc, 1)[0]) if np.ptp(q) > 0 else 0.0
    lo, hi = float(dfc.min()), float(dfc.max())
    return DefectReport(lo, hi, hi - lo, slope, len(traj.rows))
