from fractions import Fraction as F

import pytest

from pgnlab.exact_pwl import PiecewiseLinear, merged_knots, pwl_eval
from pgnlab.system_builder import (
    BlockSpec,
    GeneralizedSystem,
    GrowthSequence,
    SystemParams,
    build_block,
    build_system,
)
from pgnlab.system_checks import (
    PhiEstimates,
    PreconditionError,
    asymptotic_report,
    block_extrema,
    liminf_c_target,
    phi_inequality_check,
    separation_check,
    system_phi_estimates,
    validate_gsystem,
)


def system(n=3, k=2, theta=1, m0=0, m1=2):
    return build_system(SystemParams(n, k, GrowthSequence.theta_form(theta), m0, m1))


def test_built_system_passes():
    rep = validate_gsystem(system())
    assert rep.ok and rep.witnesses == []
    assert rep.groups


def test_swap_on_interior_knot_breaks_ordering():
    P = system()
    q = P.registry[1].s
    f1, f2 = P.components[0], P.components[1]
    v1, v2 = pwl_eval(f1, q), pwl_eval(f2, q)
    assert v1 < v2

    def with_value(f, val):
        ks = list(f.knots) if q in f.knots else sorted(set(f.knots) | {q})
        vs = [val if k == q else pwl_eval(f, k) for k in ks]
        return PiecewiseLinear(ks, vs)

    M = P.replace_component(0, with_value(f1, v2)).replace_component(1, with_value(f2, v1))
    rep = validate_gsystem(M)
    assert not rep.g1_ok
    assert any(w.axiom == "G1" and w.q == q for w in rep.witnesses)


def test_parallel_sloped_components_break_g2():
    # P_1 = P_2 - 1 on [0, 2] with both of slope 1/2: sloped but not coincident
    f1 = PiecewiseLinear([2, 4], [F(1, 2), F(3, 2)])
    f2 = PiecewiseLinear([2, 4], [F(3, 2), F(5, 2)])
    f3 = PiecewiseLinear([2, 4], [0, 0])
    # reorder so the values are non-decreasing: f3 <= f1 <= f2, sum = q
    P = GeneralizedSystem(2, None, None, (f3, f1, f2), ())
    rep = validate_gsystem(P)
    assert rep.g1_ok
    assert not rep.g2_ok


def perturbations(P):
    for j, f in enumerate(P.components):
        for i in range(len(f.knots)):
            for delta in (F(1, 7), F(-1, 7)):
                vs = list(f.values)
                vs[i] += delta
                yield P.replace_component(j, PiecewiseLinear(f.knots, vs))


def test_every_single_knot_perturbation_is_caught():
    P = system(3, 2, 1, 0, 1)
    count = 0
    for M in perturbations(P):
        assert not validate_gsystem(M).ok
        count += 1
    assert count > 20


def test_block_extrema_examples():
    e = block_extrema(build_block(BlockSpec.of(1, 2, 8, 1, 1, F(1, 2))))
    assert (e.max_a_ratio, e.argmax_q, e.min_c_ratio, e.argmin_q) == (F(1, 6), 6, F(2, 7), 7)
    e = block_extrema(build_block(BlockSpec.of(1, 2, 8, 1, 1, 1)))
    assert (e.max_a_ratio, e.min_c_ratio) == (F(1, 4), F(2, 5))
    with pytest.raises(PreconditionError):
        block_extrema(build_block(BlockSpec.of(1, 2, 4, 1, 1, 1)))


def test_block_extrema_against_knot_scan():
    # A/q and C/q are monotone between knots, so scanning knots is exhaustive
    blk = build_block(BlockSpec.of(F(1, 2), 3, 40, F(1, 3), 2, F(3, 4)))
    e = block_extrema(blk)
    ks = merged_knots([blk.A, blk.C])
    assert e.max_a_ratio == max(pwl_eval(blk.A, q) / q for q in ks)
    assert e.min_c_ratio == min(pwl_eval(blk.C, q) / q for q in ks)


def test_asymptotic_examples():
    rep = asymptotic_report(system(3, 2, 1, 0, 3), 3, 2)
    assert rep.liminf_c_target == F(1, 3) == rep.theorem_target
    assert rep.target_matches
    row1 = [r for r in rep.rows if r.m == 1][0]
    assert row1.max_a_ratio == F(1, 258)
    assert row1.min_c_ratio == F(128, 385)
    assert liminf_c_target(1, F(1, 2)) == F(1, 3)


def test_asymptotic_monotone_from_zero():
    for n, k in [(3, 2), (5, 3), (6, 6)]:
        rows = asymptotic_report(system(n, k, 1, 0, 4), n, k).rows
        a = [r.max_a_ratio for r in rows]
        c = [r.min_c_ratio for r in rows]
        assert all(x > y for x, y in zip(a, a[1:]))
        assert all(x < y for x, y in zip(c, c[1:]))
        assert all(x < F(1, n - k + 2) for x in c)


def test_separation_examples():
    rep = separation_check(1, 2, range(0, 5), 3, 2)
    assert rep.ok
    r0 = rep.rows[0]
    assert (r0.r_prime, r0.t, r0.sandwich) == (12, 515, True)
    assert [r for r in rep.rows if r.m == 2][0].amplitude == 256
    with pytest.raises(PreconditionError):
        separation_check(2, 1, range(0, 2), 3, 2)


def test_phi_synthetic_violations():
    est = PhiEstimates([0, F(1, 2), 1], [F(1, 10), F(1, 2), 1], 1, 2, exact=True)
    chk = phi_inequality_check(est, 2)
    assert not chk.ok
    assert not chk.comparisons[0].passed

    est = PhiEstimates([0, F(2, 5), F(2, 5), F(1, 2)], [0, F(2, 5), F(1, 2), 1], 1, 2, exact=True)
    chk = phi_inequality_check(est, 3, 2)
    assert chk.chain_applied
    bad = [c for c in chk.comparisons if not c.passed]
    assert any(c.name.startswith("3*over_2") for c in bad)


def test_phi_from_system_tail():
    P = system(3, 2, 1, 0, 3)
    regs = P.registry
    est = system_phi_estimates(P, regs[1].r, regs[2].r)
    assert est.exact
    assert est.over[0] == F(1, 258)
    assert est.under[2] == F(128, 385)
    chk = phi_inequality_check(est, 3, 2)
    assert chk.ok and chk.chain_applied
