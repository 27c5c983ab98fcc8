"""Exact LLL reduction of an integer basis with respect to a rational form."""

from __future__ import annotations

import math
from fractions import Fraction


def _integer_gram(G):
    den = math.lcm(*(Fraction(v).denominator for row in G for v in row))
    return [[int(Fraction(v) * den) for v in row] for row in G]


def _gso(Gb):
    """Gram-Schmidt coefficients and squared lengths from a Gram matrix."""
    d = len(Gb)
    mu = [[Fraction(0)] * d for _ in range(d)]
    r = [[Fraction(0)] * d for _ in range(d)]
    norms = [Fraction(0)] * d
    for i in range(d):
        for j in range(i + 1):
            acc = Fraction(Gb[i][j])
            for l in range(j):
                acc -= mu[j][l] * r[i][l]
            r[i][j] = acc
            if j < i:
                mu[i][j] = acc / norms[j]
        norms[i] = r[i][i]
    return mu, norms


def lll_gram(G, delta=Fraction(3, 4)):
    """LLL-reduce the standard basis for the form ``x^T G x``.

    Returns the reduced basis as a list of integer vectors (a unimodular
    matrix, one basis vector per entry).  Exact arithmetic throughout; the
    form is scaled to integers first, which does not change the result.
    """
    d = len(G)
    Gb = _integer_gram(G)
    B = [[int(i == j) for j in range(d)] for i in range(d)]

    def sub(k, j, q):
        # b_k <- b_k - q b_j, keeping Gb = B G B^T in sync
        B[k] = [a - q * b for a, b in zip(B[k], B[j])]
        row = [Gb[k][i] - q * Gb[j][i] for i in range(d)]
        row[k] -= q * row[j]
        for i in range(d):
            Gb[k][i] = Gb[i][k] = row[i]

    def swap(k):
        B[k], B[k - 1] = B[k - 1], B[k]
        Gb[k], Gb[k - 1] = Gb[k - 1], Gb[k]
        for row in Gb:
            row[k], row[k - 1] = row[k - 1], row[k]

    mu, norms = _gso(Gb)
    k = 1
    while k < d:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                sub(k, j, q)
                mu, norms = _gso(Gb)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            swap(k)
            mu, norms = _gso(Gb)
            k = max(k - 1, 1)
    return B
