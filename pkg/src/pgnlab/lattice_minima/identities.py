"""Exact checks of the relations between the bodies C, K, K* and the
cube/lattice formulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..exact_pwl import as_rational
from .bodies import C, CUBE, K, KSTAR, GaugeBody, TargetPoint, rational_root
from .minima import successive_minima


class IdentityPreconditionError(ValueError):
    pass


@dataclass
class IdentityReport:
    name: str
    passed: bool
    left: list
    right: list
    detail: str = ""


def _normalized(xi) -> TargetPoint:
    pt = xi if isinstance(xi, TargetPoint) else TargetPoint(xi)
    if not pt.normalized:
        raise IdentityPreconditionError("these identities need xi_0 = 1")
    return pt


def _root(pt: TargetPoint, N, root) -> tuple:
    N = as_rational(N)
    if N < 1:
        raise IdentityPreconditionError(f"N must be >= 1, got {N}")
    if root is None:
        root = rational_root(N, pt.n)
        if root is None:
            raise IdentityPreconditionError(f"N = {N} is not a perfect {pt.n}-th power of a rational")
    root = as_rational(root)
    if root <= 0 or root**pt.n != N:
        raise IdentityPreconditionError(f"root^{pt.n} = {root ** pt.n} != N = {N}")
    return N, root


def mu_equivalence_check(xi, N, root=None, ceiling=None) -> IdentityReport:
    """Minima of the unit cube on the scaled lattice vs. K on Z^{n+1}."""
    pt = _normalized(xi)
    N, root = _root(pt, N, root)
    cube = successive_minima(GaugeBody(CUBE, pt, N, root), ceiling)
    kbody = successive_minima(GaugeBody(K, pt, N, root), ceiling)
    left, right = list(cube.lambdas), list(kbody.lambdas)
    return IdentityReport("mu_equivalence", left == right, left, right)


def mahler_constants(n: int) -> tuple:
    """Default bracket ``[1/((n+1)!(n+1)), (n+1)!(n+1)]`` for the products."""
    c = math.factorial(n + 1) * (n + 1)
    return Fraction(1, c), Fraction(c)


@dataclass
class DualityReport:
    products: list
    lower: Fraction
    upper: Fraction
    lambdas_k: list
    lambdas_kstar: list

    @property
    def passed(self) -> bool:
        return all(self.lower <= p and p <= self.upper for p in self.products)


def duality_defect(xi, N, root=None, bounds: Optional[tuple] = None, ceiling=None) -> DualityReport:
    """``p_j = lambda_j(K) * lambda_{n+2-j}(K*)`` for j = 1..n+1."""
    pt = _normalized(xi)
    N, root = _root(pt, N, root)
    lk = successive_minima(GaugeBody(K, pt, N, root), ceiling).lambdas
    ls = successive_minima(GaugeBody(KSTAR, pt, N, root), ceiling).lambdas
    d = pt.dim
    products = [lk[j] * ls[d - 1 - j] for j in range(d)]
    lo, hi = bounds if bounds is not None else mahler_constants(pt.n)
    return DualityReport(products, as_rational(lo), as_rational(hi), lk, ls)


def scaling_identity_check(xi, M, ceiling=None) -> IdentityReport:
    """``lambda_j(C(M^{n+1})) = M * lambda_j(K*(M^n))`` exactly."""
    pt = _normalized(xi)
    M = as_rational(M)
    if M <= 0:
        raise IdentityPreconditionError("M must be positive")
    n = pt.n
    lc = successive_minima(GaugeBody(C, pt, M ** (n + 1)), ceiling).lambdas
    ls = successive_minima(GaugeBody(KSTAR, pt, M**n, M), ceiling).lambdas
    right = [M * v for v in ls]
    return IdentityReport("scaling", lc == right, lc, right)
