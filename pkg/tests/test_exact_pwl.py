from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgnlab.exact_pwl import (
    LEFT,
    RIGHT,
    DomainError,
    PiecewiseLinear,
    as_rational,
    fmt_rational,
    merged_knots,
    pwl_eval,
    pwl_linear_combination,
    pwl_slope,
)

small = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def pwl(draw, lo=None, hi=None):
    n = draw(st.integers(2, 7))
    ks = sorted(set(draw(st.lists(small, min_size=n, max_size=n))))
    if len(ks) < 2:
        ks = [F(0), F(1)]
    vs = draw(st.lists(small, min_size=len(ks), max_size=len(ks)))
    return PiecewiseLinear(ks, vs)


def test_as_rational_accepts_strings_and_ints():
    assert as_rational("3/6") == F(1, 2)
    assert as_rational(4) == F(4)
    assert as_rational(F(2, 3)) == F(2, 3)
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)


def test_fmt_rational():
    assert fmt_rational(F(6, 4)) == "3/2"
    assert fmt_rational(F(-5)) == "-5"


def test_eval_block_shape():
    A = PiecewiseLinear([6, 19, 20], [1, 1, 2])
    assert pwl_eval(A, 6) == 1
    assert pwl_eval(A, F(39, 2)) == F(3, 2)
    assert pwl_eval(A, 20) == 2


def test_eval_outside_domain():
    A = PiecewiseLinear([0, 1], [0, 1])
    with pytest.raises(DomainError):
        pwl_eval(A, 2)
    with pytest.raises(DomainError):
        pwl_eval(A, F(-1, 3))


def test_slopes_one_sided():
    C = PiecewiseLinear([6, 7, 19, 20], [2, 2, 8, 8])
    assert pwl_slope(C, 7, LEFT) == 0
    assert pwl_slope(C, 7, RIGHT) == F(1, 2)
    assert pwl_slope(C, 19, LEFT) == F(1, 2)
    assert pwl_slope(C, 19, RIGHT) == 0
    with pytest.raises(DomainError):
        pwl_slope(C, 6, LEFT)
    with pytest.raises(DomainError):
        pwl_slope(C, 20, RIGHT)


def test_knots_must_increase():
    with pytest.raises(ValueError):
        PiecewiseLinear([0, 0, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        PiecewiseLinear([0], [1])
    with pytest.raises(ValueError):
        PiecewiseLinear([0, 1], [1])


def test_linear_combination_on_intersection():
    f = PiecewiseLinear([0, 2], [0, 2])
    g = PiecewiseLinear([1, 3], [5, 5])
    h = pwl_linear_combination([2, -1], [f, g])
    assert h.domain == (1, 2)
    assert pwl_eval(h, F(3, 2)) == 2 * F(3, 2) - 5
    with pytest.raises(DomainError):
        pwl_linear_combination([1, 1], [PiecewiseLinear([0, 1], [0, 0]), PiecewiseLinear([2, 3], [0, 0])])


def test_concat_requires_continuity():
    f = PiecewiseLinear([0, 1], [0, 1])
    g = PiecewiseLinear([1, 2], [1, 3])
    h = f.concat(g)
    assert h.domain == (0, 2) and pwl_eval(h, 2) == 3
    with pytest.raises(ValueError):
        f.concat(PiecewiseLinear([1, 2], [2, 3]))


def test_normalize_drops_collinear_knots():
    f = PiecewiseLinear([0, 1, 2, 3], [0, 1, 2, 2])
    g = f.normalize()
    assert list(g.knots) == [0, 2, 3]
    assert f.equals(g)


@settings(max_examples=120, deadline=None)
@given(pwl(), st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_eval_is_convex_combination_inside_segments(f, t):
    for i, (a, b) in enumerate(zip(f.knots, f.knots[1:])):
        q = a + t * (b - a)
        assert pwl_eval(f, q) == (1 - t) * f.values[i] + t * f.values[i + 1]


@settings(max_examples=120, deadline=None)
@given(pwl(), pwl(), small, small)
def test_linear_combination_pointwise(f, g, c1, c2):
    lo, hi = max(f.domain[0], g.domain[0]), min(f.domain[1], g.domain[1])
    if lo >= hi:
        with pytest.raises(DomainError):
            pwl_linear_combination([c1, c2], [f, g])
        return
    h = pwl_linear_combination([c1, c2], [f, g])
    for q in merged_knots([f.restrict(lo, hi), g.restrict(lo, hi)]):
        assert pwl_eval(h, q) == c1 * pwl_eval(f, q) + c2 * pwl_eval(g, q)


@settings(max_examples=120, deadline=None)
@given(pwl())
def test_restrict_and_normalize_preserve_values(f):
    lo, hi = f.domain
    mid = (lo + hi) / 2
    r = f.restrict(lo, mid)
    n = f.normalize()
    for q in merged_knots([f]) + [mid, (lo + mid) / 2]:
        assert pwl_eval(n, q) == pwl_eval(f, q)
        if q <= mid:
            assert pwl_eval(r, q) == pwl_eval(f, q)


@settings(max_examples=80, deadline=None)
@given(pwl())
def test_slope_matches_difference_quotient(f):
    for i, (a, b) in enumerate(zip(f.knots, f.knots[1:])):
        s = (f.values[i + 1] - f.values[i]) / (b - a)
        assert pwl_slope(f, a, RIGHT) == s
        assert pwl_slope(f, b, LEFT) == s
