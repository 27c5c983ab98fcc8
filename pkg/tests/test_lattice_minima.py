import math
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from oracles import c_body_minima_sq, generic_box_minima_sq
from pgnlab.lattice_minima import (
    CUBE,
    C,
    K,
    KSTAR,
    BodyError,
    GaugeBody,
    GaugeValue,
    IdentityPreconditionError,
    ResourceLimitError,
    SquaredGauge,
    TargetPoint,
    TrajectoryError,
    duality_defect,
    enumerate_candidates,
    gauge_value,
    mahler_constants,
    minkowski_defect_report,
    mu_equivalence_check,
    phi_window_estimates,
    precision_horizon,
    scaling_identity_check,
    successive_minima,
    successive_minima_of_gauge,
    trace_trajectory,
)
from pgnlab.lattice_minima.enumeration import canonical_sign
from pgnlab.lattice_minima.reduction import lll_gram


# -- gauges ---------------------------------------------------------------------------


def test_gauge_examples():
    body = GaugeBody(C, TargetPoint([1, F(1, 2), F(1, 3)]), 6)
    assert gauge_value(body, (0, 1, -1)) == GaugeValue(2)
    assert gauge_value(body, (0, 0, 1)).exact() == 2
    assert gauge_value(body, (0, 0, 0)).exact() == 0
    assert str(gauge_value(body, (0, 1, -1))) == "sqrt(2)"


def test_target_point_validation():
    with pytest.raises(BodyError):
        TargetPoint([0, 0, 0])
    with pytest.raises(BodyError):
        TargetPoint([1, 2])


def test_sandwich_bound():
    body = GaugeBody(K, TargetPoint([1, F(2, 3), F(5, 7)]), 9, 3)
    g = body.squared_gauge
    h = g.gram()
    c = g.n_branches + (1 if g.euclid else 0)
    for x in product(range(-3, 4), repeat=3):
        hx = sum(h[i][j] * x[i] * x[j] for i in range(3) for j in range(3))
        assert g(x) <= hx <= c * g(x)


# -- enumeration ------------------------------------------------------------------------


def identity(n):
    return [[F(int(i == j)) for j in range(n)] for i in range(n)]


def test_enumerate_examples():
    assert sorted(enumerate_candidates(identity(3), 1)) == sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    pts = enumerate_candidates(identity(3), 2)
    assert len(pts) == 9
    assert enumerate_candidates(identity(3), 0) == []


def test_enumerate_matches_box():
    G = [[F(3), F(1), F(-1)], [F(1), F(2), F(1, 2)], [F(-1), F(1, 2), F(5, 2)]]
    R = F(9)
    got = set(enumerate_candidates(G, R))
    box = set()
    for x in product(range(-6, 7), repeat=3):
        if any(x) and sum(G[i][j] * x[i] * x[j] for i in range(3) for j in range(3)) <= R:
            box.add(tuple(int(v) for v in canonical_sign(np.array([x]))[0]))
    assert got == box


def test_lll_is_unimodular_and_reduced():
    G = [[F(101), F(97), F(3)], [F(97), F(95), F(2)], [F(3), F(2), F(7)]]
    U = lll_gram(G)
    M = np.array(U, dtype=object)
    det = M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1]) - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0]) + M[0, 2] * (
        M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]
    )
    assert abs(det) == 1
    norms = [sum(G[i][j] * u[i] * u[j] for i in range(3) for j in range(3)) for u in U]
    assert norms[0] <= 101


def test_resource_guard():
    body = GaugeBody(C, TargetPoint([1, F(1, 2), F(1, 3)]), 64)
    with pytest.raises(ResourceLimitError):
        successive_minima(body, ceiling=3)


def test_env_ceiling(monkeypatch):
    monkeypatch.setenv("PGNLAB_CANDIDATE_CEILING", "3")
    with pytest.raises(ResourceLimitError):
        successive_minima(GaugeBody(C, TargetPoint([1, F(1, 2), F(1, 3)]), 64))


# -- minima -------------------------------------------------------------------------------


def test_minima_c_axis_point():
    res = successive_minima(GaugeBody(C, TargetPoint([1, 0, 0]), 6))
    assert res.lambdas_sq == (1, 1, 36)
    assert [tuple(w) for w in res.witnesses] == [(0, 1, 0), (0, 0, 1), (1, 0, 0)]


def test_minima_c_fixture():
    res = successive_minima(GaugeBody(C, TargetPoint([1, F(1, 2), F(1, 3)]), 6))
    assert res.lambdas_sq == (2, 3, 4)
    assert [str(v) for v in res.lambdas] == ["sqrt(2)", "sqrt(3)", "2"]
    assert [tuple(w) for w in res.witnesses] == [(0, 1, -1), (1, -1, -1), (0, 0, 1)]


def test_minima_k_fixture():
    res = successive_minima(GaugeBody(K, TargetPoint([1, 0, 0, 0]), 8))
    assert res.lambdas_sq == (F(1, 64), 4, 4, 4)


def test_witness_rank_and_gauges():
    body = GaugeBody(C, TargetPoint([1, F(5, 7), F(2, 9)]), 13)
    res = successive_minima(body)
    W = np.array(res.witnesses, dtype=object)
    assert np.linalg.matrix_rank(W.astype(float)) == 3
    for w, l2 in zip(res.witnesses, res.lambdas_sq):
        assert body.squared_gauge(w) == l2


def body_gauge_direct(kind, xi, P, root):
    """Gauges written straight from the body definitions, squared."""
    xi = [F(v) for v in xi]

    def g(x):
        if kind == C:
            return max(sum(F(v) ** 2 for v in x), (P * sum(a * v for a, v in zip(xi, x))) ** 2)
        if kind == KSTAR:
            return max(sum(F(v) ** 2 for v in x) / root**2, (P * sum(a * v for a, v in zip(xi, x))) ** 2)
        comps = [F(x[0]) / P] + [root * (xi[j] * x[0] - x[j]) for j in range(1, len(x))]
        if kind == K:
            return max(c * c for c in comps)
        raise ValueError(kind)

    return g


def bound_for(kind, xi, P, root):
    """Per-axis box half-widths covering gauge <= sqrt(lam2)."""
    xi = [F(v) for v in xi]

    def bound(lam2):
        lam = F(math.isqrt(math.ceil(lam2)) + 1)
        if kind == C:
            return math.ceil(lam)
        if kind == KSTAR:
            return math.ceil(root * lam)
        # |x_0| <= P lam and |x_j| <= |xi_j| |x_0| + lam / root
        x0 = math.floor(P * lam)
        return (x0,) + tuple(math.floor(abs(a) * x0 + lam / root) for a in xi[1:])

    return bound


CASES = [
    (C, (1, F(2, 5), F(7, 9)), F(11), None),
    (C, (2, 1, F(-1, 3)), F(5, 2), None),
    (KSTAR, (1, F(1, 2), F(1, 3)), F(4), F(2)),
    (KSTAR, (1, F(3, 4), F(2, 3)), F(9), F(3)),
    (K, (1, F(1, 2), F(1, 3)), F(4), F(2)),
    (K, (1, F(3, 5), F(1, 4)), F(9), F(3)),
    (K, (1, F(1, 3), F(1, 2)), F(1), F(1)),
]


@pytest.mark.parametrize("kind, xi, P, root", CASES)
def test_minima_against_box_oracle(kind, xi, P, root):
    body = GaugeBody(kind, TargetPoint(list(xi)), P, root)
    got = successive_minima(body).lambdas_sq
    g = body_gauge_direct(kind, xi, P, body.root)
    want = generic_box_minima_sq(g, 3, bound_for(kind, xi, P, body.root))
    assert list(got) == list(want)


@pytest.mark.parametrize("xi, N, root", [((1, F(1, 2), F(1, 3)), 4, 2), ((1, F(2, 3), F(1, 5)), 9, 3)])
def test_cube_against_generator_oracle(xi, N, root):
    body = GaugeBody(CUBE, TargetPoint(list(xi)), F(N), F(root))
    V = body.generator_matrix()

    def g(x):
        y = [sum(x[i] * V[i][j] for i in range(3)) for j in range(3)]
        return max(v * v for v in y)

    want = generic_box_minima_sq(g, 3, bound_for(K, xi, F(N), F(root)))
    assert list(successive_minima(body).lambdas_sq) == list(want)


def test_c_oracle_spot_checks():
    for xi in [(1, F(1, 2), F(1, 3)), (1, F(5, 12), F(23, 12)), (1, 0, F(7, 11))]:
        for Q in (1, 8, 64):
            got = successive_minima(GaugeBody(C, TargetPoint(list(xi)), Q)).lambdas_sq
            assert list(got) == c_body_minima_sq(xi, Q)


@pytest.mark.parametrize("kind, P, root", [(C, 7, None), (CUBE, 4, 2)])
def test_dilated_body_scales_minima(kind, P, root):
    body = GaugeBody(kind, TargetPoint([1, F(1, 2), F(1, 3)]), P, root)
    g = body.squared_gauge
    base = successive_minima(body).lambdas_sq
    c = F(3, 2)
    # gauge of c*body is gauge/c
    scaled = SquaredGauge(g.dim, g.euclid / c**2, tuple((w / c**2, a) for w, a in g.branches))
    got = successive_minima_of_gauge(scaled).lambdas_sq
    assert [x * c**2 for x in got] == list(base)


# -- identities ----------------------------------------------------------------------------


def test_mu_equivalence_examples():
    rep = mu_equivalence_check([1, 0, 0, 0], 8, 2)
    assert rep.passed
    assert [str(v) for v in rep.left] == ["1/8", "2", "2", "2"]
    assert mu_equivalence_check([1, F(1, 2), F(1, 3)], 1, 1).passed
    with pytest.raises(IdentityPreconditionError):
        mu_equivalence_check([1, F(1, 2), F(1, 3)], 2)
    with pytest.raises(IdentityPreconditionError):
        mu_equivalence_check([2, 1, 1], 4)


def test_duality_examples():
    rep = duality_defect([1, 0, 0], 4, 2)
    assert rep.products == [1, 1, 1]
    assert [str(v) for v in rep.lambdas_k] == ["1/4", "2", "2"]
    assert [str(v) for v in rep.lambdas_kstar] == ["1/2", "1/2", "4"]
    rep = duality_defect([1, F(1, 2), F(1, 3)], 4)
    assert rep.passed and len(rep.products) == 3
    lo, hi = mahler_constants(2)
    assert (lo, hi) == (F(1, 18), 18)


def test_duality_pairing_symmetry():
    rep = duality_defect([1, F(1, 2), F(1, 3)], 4)
    rev = [rep.lambdas_kstar[j] * rep.lambdas_k[2 - j] for j in range(3)]
    assert rev == list(reversed(rep.products))


def test_scaling_examples():
    rep = scaling_identity_check([1, 0, 0], 2)
    assert rep.passed
    assert [str(v) for v in rep.left] == ["1", "1", "8"]
    assert scaling_identity_check([1, F(1, 2), F(1, 3)], 2).passed
    assert scaling_identity_check([1, F(1, 2), F(1, 3)], 1).passed


# -- trajectories ----------------------------------------------------------------------------


def test_trajectory_axis_point():
    traj = trace_trajectory([1, 0, 0], [1, 2, 4, 8])
    for r in traj.rows:
        assert r.L[0] == 0 and r.L[1] == 0
        assert abs(r.L[2] - r.q) < 1e-12
        assert abs(r.defect) < 1e-12
    est = phi_window_estimates(traj, F(1, 2))
    assert est.under[2] == pytest.approx(1) and est.over[0] == 0
    rep = minkowski_defect_report(traj)
    assert rep.range < 1e-12 and abs(rep.slope) < 1e-12


def test_trajectory_fixture_row():
    traj = trace_trajectory([1, F(1, 2), F(1, 3)], [6])
    r = traj.rows[0]
    assert r.L == pytest.approx([0.3466, 0.5493, 0.6931], abs=1e-4)
    assert r.defect == pytest.approx(0.2027, abs=1e-4)


def test_trajectory_rows_ordered():
    traj = trace_trajectory([1, F(63, 50), F(793, 500)], [2**i for i in range(9)])
    for r in traj.rows:
        assert r.L[0] <= r.L[1] + 1e-12 <= r.L[2] + 2e-12


def test_trajectory_guards():
    with pytest.raises(TrajectoryError):
        trace_trajectory([1, 0, 0], [4, 2])
    with pytest.raises(TrajectoryError):
        trace_trajectory([1, 0, 0], [F(1, 2)])
    traj = trace_trajectory([1, 0, 0], [2])
    with pytest.raises(TrajectoryError):
        minkowski_defect_report(traj)
    with pytest.raises(TrajectoryError):
        phi_window_estimates(traj)


def test_trajectory_abort_keeps_prefix():
    traj = trace_trajectory([1, F(1, 2), F(1, 3)], [1, 64, 4096], ceiling=5)
    assert not traj.complete
    assert traj.aborted_at == 64
    assert len(traj.rows) == 1


def test_trajectory_workers_match_serial():
    grid = [1, 3, 9, 27]
    a = trace_trajectory([1, F(2, 7), F(3, 11)], grid)
    b = trace_trajectory([1, F(2, 7), F(3, 11)], grid, workers=2)
    assert [r.lambdas_sq for r in a.rows] == [r.lambdas_sq for r in b.rows]


def test_precision_horizon():
    assert precision_horizon([1, 0, 0]) == 0
    assert precision_horizon([1, F(63, 50), F(793, 500)]) == pytest.approx(math.log(500))
