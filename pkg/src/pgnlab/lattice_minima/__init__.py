"""Exact successive minima for the parametric convex bodies."""

from .bodies import (
    C,
    CUBE,
    K,
    KINDS,
    KSTAR,
    BodyError,
    GaugeBody,
    GaugeValue,
    SquaredGauge,
    TargetPoint,
    gauge_value,
    rational_root,
    rational_sqrt,
)
from .enumeration import (
    CEILING_ENV,
    DEFAULT_CANDIDATE_CEILING,
    FormError,
    ResourceLimitError,
    enumerate_candidates,
    enumerate_points,
)
from .minima import MinimaResult, successive_minima, successive_minima_of_gauge
from .identities import (
    DualityReport,
    IdentityPreconditionError,
    IdentityReport,
    duality_defect,
    mahler_constants,
    mu_equivalence_check,
    scaling_identity_check,
)
from .trajectory import (
    DefectReport,
    Trajectory,
    TrajectoryError,
    TrajectoryRow,
    minkowski_defect_report,
    phi_window_estimates,
    precision_horizon,
    trace_trajectory,
)
