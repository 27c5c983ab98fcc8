"""Exact Fincke-Pohst enumeration of integer points in an ellipsoid."""

from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from .reduction import lll_gram

DEFAULT_CANDIDATE_CEILING = 10**7
CEILING_ENV = "PGNLAB_CANDIDATE_CEILING"


class FormError(ValueError):
    """The quadratic form is not positive definite."""


class ResourceLimitError(RuntimeError):
    """Enumeration would exceed the candidate-count ceiling."""

    def __init__(self, count, ceiling, context=""):
        self.count = count
        self.ceiling = ceiling
        msg = f"candidate count {count} exceeds ceiling {ceiling}"
        super().__init__(f"{msg} ({context})" if context else msg)


def candidate_ceiling() -> int:
    raw = os.environ.get(CEILING_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_CANDIDATE_CEILING
    return int(raw)


def _fincke_pohst_coeffs(G):
    """``q(y) = sum_i d_i (y_i + sum_{j>i} m_ij y_j)^2``; returns (d, m)."""
    n = len(G)
    Q = [[Fraction(v) for v in row] for row in G]
    for i in range(n):
        if Q[i][i] <= 0:
            raise FormError("form is not positive definite")
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for j in range(k, n):
                Q[k][j] -= Q[k][i] * Q[i][j]
    d = [Q[i][i] for i in range(n)]
    m = [[Q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return d, m


def _floor_plus_sqrt(a: Fraction, z: Fraction) -> int:
    """floor(a + sqrt(z)) for z >= 0, exactly."""
    y = math.floor(float(a) + math.sqrt(float(z)))

    def ok(v):
        w = v - a
        return w <= 0 or w * w <= z

    while ok(y + 1):
        y += 1
    while not ok(y):
        y -= 1
    return y


def _ceil_minus_sqrt(a: Fraction, z: Fraction) -> int:
    """ceil(a - sqrt(z)) for z >= 0, exactly."""
    return -_floor_plus_sqrt(-a, z)


def enumerate_segments(G, radius2, ceiling=None, coeffs=None):
    """Integer points ``y != 0`` with ``y^T G y <= radius2``, one per +-pair.

    Returns a list of ``(prefix, lo, hi)`` where ``prefix`` fixes
    coordinates 1..d-1 and coordinate 0 ranges over ``lo..hi``.  The kept
    representative of each pair has its last non-zero coordinate positive.
    """
    radius2 = Fraction(radius2)
    if radius2 < 0:
        raise ValueError("radius must be non-negative")
    dcoef, mcoef = _fincke_pohst_coeffs(G) if coeffs is None else coeffs
    n = len(G)
    ceiling = candidate_ceiling() if ceiling is None else ceiling
    segments = []
    count = 0
    y = [0] * n

    def rec(i, rem, all_zero):
        nonlocal count
        c = sum((mcoef[i][j] * y[j] for j in range(i + 1, n) if y[j]), Fraction(0))
        z = rem / dcoef[i]
        hi = _floor_plus_sqrt(-c, z)
        lo = _ceil_minus_sqrt(-c, z)
        if all_zero:
            lo = max(lo, 0)
        if lo > hi:
            return
        if i == 0:
            if all_zero and lo == 0:
                lo = 1
            if lo <= hi:
                segments.append((tuple(y[1:]), lo, hi))
                count += hi - lo + 1
                if count > ceiling:
                    raise ResourceLimitError(count, ceiling, "ellipsoid enumeration")
            return
        for v in range(lo, hi + 1):
            y[i] = v
            t = v + c
            rec(i - 1, rem - dcoef[i] * t * t, all_zero and v == 0)
        y[i] = 0

    rec(n - 1, radius2, True)
    return segments


def segments_to_array(segments, n):
    total = sum(hi - lo + 1 for _, lo, hi in segments)
    out = np.zeros((total, n), dtype=np.int64)
    pos = 0
    for prefix, lo, hi in segments:
        k = hi - lo + 1
        out[pos : pos + k, 0] = np.arange(lo, hi + 1)
        if n > 1:
            out[pos : pos + k, 1:] = prefix
        pos += k
    return out


def canonical_sign(X):
    """Flip rows so the first non-zero entry is positive."""
    if len(X) == 0:
        return X
    nz = X != 0
    first = np.argmax(nz, axis=1)
    lead = X[np.arange(len(X)), first]
    return np.where((lead < 0)[:, None], -X, X)


class Ellipsoid:
    """Integer points of ``x^T G x <= R^2`` for varying R.

    The LLL reduction of G is computed once and reused across radii; it
    only affects speed, never the enumerated set.
    """

    def __init__(self, G, reduce=True):
        n = len(G)
        self.G = [[Fraction(v) for v in row] for row in G]
        for i in range(n):
            for j in range(i):
                if self.G[i][j] != self.G[j][i]:
                    raise FormError("form is not symmetric")
        if reduce:
            self.U = lll_gram(self.G)
        else:
            self.U = [[int(i == j) for j in range(n)] for i in range(n)]
        U, G = self.U, self.G
        self.Gr = [
            [sum(G[a][b] * U[i][a] * U[j][b] for a in range(n) if U[i][a] for b in range(n) if U[j][b]) for j in range(n)]
            for i in range(n)
        ]
        self.coeffs = _fincke_pohst_coeffs(self.Gr)
        self.Umat = np.array(U, dtype=np.int64)

    @property
    def dim(self) -> int:
        return len(self.G)

    def points(self, radius2, ceiling=None):
        segs = enumerate_segments(self.Gr, radius2, ceiling, self.coeffs)
        Y = segments_to_array(segs, self.dim)
        return canonical_sign(Y @ self.Umat)


def enumerate_points(G, radius2, reduce=True, ceiling=None):
    """All non-zero integer x with ``x^T G x <= radius2``, one per +-pair.

    Rows of the returned int64 array have their first non-zero entry
    positive.
    """
    return Ellipsoid(G, reduce).points(radius2, ceiling)


def enumerate_candidates(form, radius2, ceiling=None):
    """List version of :func:`enumerate_points`, sorted lexicographically."""
    X = enumerate_points(form, radius2, ceiling=ceiling)
    return sorted(tuple(int(v) for v in row) for row in X)
