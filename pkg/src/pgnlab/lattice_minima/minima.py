"""Exact successive minima of the parametric bodies on Z^{n+1}."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bodies import GaugeBody, GaugeValue, SquaredGauge
from .enumeration import Ellipsoid, ResourceLimitError, candidate_ceiling, canonical_sign

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class MinimaResult:
    lambdas_sq: tuple
    witnesses: tuple
    kind: str = ""
    candidates: int = 0

    @property
    def lambdas(self) -> list:
        return [GaugeValue(s) for s in self.lambdas_sq]

    def __len__(self):
        return len(self.lambdas_sq)


def squared_gauges(gauge: SquaredGauge, X: np.ndarray) -> np.ndarray:
    """``L * g(x)^2`` for every row of X as exact integers.

    Uses int64 when a magnitude bound shows no overflow, Python ints otherwise.
    """
    L, E, branches = gauge.integer_form
    if len(X) == 0:
        return np.zeros(0, dtype=np.int64)
    xmax = int(np.abs(X).max())
    d = X.shape[1]
    bound = E * d * xmax * xmax
    for c, b in branches:
        s = sum(abs(v) for v in b) * xmax
        bound = max(bound, c * s * s)
    Xw = X if bound < _INT64_SAFE else X.astype(object)
    out = E * np.sum(Xw * Xw, axis=1) if E else None
    for c, b in branches:
        bw = np.array(b, dtype=np.int64 if bound < _INT64_SAFE else object)
        dots = Xw @ bw
        vals = c * dots * dots
        out = vals if out is None else np.maximum(out, vals)
    return out


def _complement_basis(rows):
    """Integer basis (as rows) of the orthogonal complement of span(rows)."""
    d = len(rows[0])
    M = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(d):
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pv = M[rank][col]
        M[rank] = [v / pv for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(d) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * d
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc]
        den = math.lcm(*(x.denominator for x in v))
        basis.append([int(x * den) for x in v])
    return basis


def _outside_span(X, picked):
    Z = _complement_basis(picked)
    Zm = np.array(Z, dtype=object)
    xmax = int(np.abs(X).max()) if len(X) else 0
    zmax = max(abs(v) for row in Z for v in row)
    if xmax * zmax * X.shape[1] < _INT64_SAFE:
        Zm = Zm.astype(np.int64)
        prod = X @ Zm.T
    else:
        prod = X.astype(object) @ Zm.T
    return np.any(prod != 0, axis=1)


def greedy_independent(X, g, count):
    """Sort rows by gauge and greedily pick linearly independent ones.

    Ties in gauge go to the shorter Euclidean vector, then to the
    lexicographically larger one (rows are sign-normalized with a positive
    leading entry, so unit vectors come out in coordinate order).
    """
    norms = np.sum(X.astype(object) * X, axis=1) if g.dtype == object else np.sum(X * X, axis=1)
    if g.dtype == object:
        order = np.array(sorted(range(len(X)), key=lambda i: (g[i], norms[i], tuple(-v for v in X[i]))), dtype=np.int64)
    else:
        order = np.lexsort(tuple(-X[:, j] for j in range(X.shape[1] - 1, -1, -1)) + (norms, g))
    Xs, gs = X[order], g[order]
    picked, picked_g = [], []
    pos = 0
    while len(picked) < count and pos < len(Xs):
        if not picked:
            idx = pos
        else:
            mask = _outside_span(Xs[pos:], picked)
            hits = np.flatnonzero(mask)
            if len(hits) == 0:
                break
            idx = pos + int(hits[0])
        picked.append([int(v) for v in Xs[idx]])
        picked_g.append(gs[idx])
        pos = idx + 1
    return picked, picked_g


def seed_vectors(ell: Ellipsoid):
    """Standard basis plus the LLL-reduced basis of the sandwich form."""
    d = ell.dim
    vecs = [[int(i == j) for j in range(d)] for i in range(d)]
    for col in ell.U:
        if col not in vecs:
            vecs.append(list(col))
    return canonical_sign(np.array(vecs, dtype=np.int64))


def successive_minima_of_gauge(gauge: SquaredGauge, kind: str = "", ceiling=None) -> MinimaResult:
    d = gauge.dim
    ceiling = candidate_ceiling() if ceiling is None else ceiling
    L = gauge.integer_form[0]
    ell = Ellipsoid(gauge.gram())
    c = gauge.n_branches
    S = seed_vectors(ell)
    sg = squared_gauges(gauge, S)
    _, seed_g = greedy_independent(S, sg, d)
    hat_sq = Fraction(int(max(seed_g)), L)
    # every x with g(x) <= lam has h(x) <= c * lam^2
    cap = c * hat_sq
    radius2 = min(cap, c * Fraction(int(min(sg)), L))
    while True:
        X = ell.points(radius2, ceiling)
        g = squared_gauges(gauge, X)
        picked, pg = greedy_independent(X, g, d) if len(X) else ([], [])
        complete_upto = radius2 / c
        if len(picked) == d and Fraction(int(pg[-1]), L) <= complete_upto:
            return MinimaResult(
                tuple(Fraction(int(v), L) for v in pg),
                tuple(tuple(p) for p in picked),
                kind,
                len(X),
            )
        if radius2 >= cap:
            raise RuntimeError("seed bound failed to confirm the minima")
        radius2 = min(2 * radius2, cap)


def successive_minima(body: GaugeBody, ceiling=None) -> MinimaResult:
    try:
        return successive_minima_of_gauge(body.squared_gauge, body.kind, ceiling)
    except ResourceLimitError as exc:
        raise ResourceLimitError(exc.count, exc.ceiling, f"{body.kind} body, parameter {body.parameter}") from None
