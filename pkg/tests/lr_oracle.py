"""Littlewood-Richardson coefficients from Schur functions (test oracle).

``c^lam_{mu nu}`` is the coefficient of ``s_nu`` in the skew Schur function
``s_{lam/mu}``.  In ``n`` variables that coefficient equals the coefficient
of ``x^(nu + delta)`` in ``a_delta * s_{lam/mu}`` (``a_delta`` the
Vandermonde alternant), and ``s_{lam/mu}`` is expanded with the
Jacobi-Trudi determinant ``det(h_{lam_i - mu_j - i + j})``.  The coefficient
of ``x^alpha`` in a product ``h_a1 ... h_an`` counts non-negative integer
matrices with row sums ``a`` and column sums ``alpha``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def _sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


@lru_cache(maxsize=None)
def _tables(rows: tuple, cols: tuple) -> int:
    """Number of non-negative integer matrices with the given margins."""
    if sum(rows) != sum(cols) or any(c < 0 for c in cols):
        return 0
    if not rows:
        return 1
    first, rest = rows[0], rows[1:]
    total = 0
    # distribute the first row over the columns
    def spread(k, left, acc):
        nonlocal total
        if k == len(cols) - 1:
            if left <= cols[k]:
                total += _tables(rest, tuple(c - a for c, a in zip(cols, acc + [left])))
            return
        for v in range(min(left, cols[k]) + 1):
            spread(k + 1, left - v, acc + [v])

    spread(0, first, [])
    return total


def _skew_coefficient(lam, mu, alpha) -> int:
    """Coefficient of ``x^alpha`` in ``s_{lam/mu}`` (``n = len(alpha)`` variables)."""
    n = len(lam)
    total = 0
    for perm in itertools.permutations(range(n)):
        a = [lam[i] - mu[perm[i]] - i + perm[i] for i in range(n)]
        if any(x < 0 for x in a):
            continue
        total += _sign(perm) * _tables(tuple(a), tuple(alpha))
    return total


def lr_coefficient(mu, nu, lam) -> int:
    n = len(lam)
    mu, nu, lam = list(mu), list(nu), list(lam)
    if sum(lam) != sum(mu) + sum(nu) or any(m > l for m, l in zip(mu, lam)):
        return 0
    delta = [n - 1 - i for i in range(n)]
    target = [nu[i] + delta[i] for i in range(n)]
    total = 0
    for perm in itertools.permutations(range(n)):
        alpha = [target[i] - delta[perm[i]] for i in range(n)]
        if any(x < 0 for x in alpha):
            continue
        total += _sign(perm) * _skew_coefficient(lam, mu, alpha)
    return total
