"""Baseline sequence similarities: DTW, soft-DTW, exact Wasserstein, cosine.

Cost conventions follow the usual definitions of each method: DTW and
soft-DTW use ``0.5 * ||z_x^i - z_y^j||^2`` per cell, the exact Wasserstein
distance uses ``||z_x^i - z_y^j||^2``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import cdist

from .core import DegenerateInputError, InvalidArgumentError, as_sequence

__all__ = [
    "cost_matrix",
    "dtw",
    "soft_dtw",
    "softmin",
    "linear_assignment",
    "exact_wasserstein",
    "cosine_meanpool",
]


def _pair(x, y):
    x = as_sequence(x)
    y = as_sequence(y)
    if x.dim != y.dim:
        raise InvalidArgumentError(f"sequence dimensions differ: {x.dim} vs {y.dim}")
    return x, y


def cost_matrix(x, y, scale: float = 0.5) -> np.ndarray:
    """``scale * ||x_i - y_j||^2`` for all pairs, shape ``(N, M)``."""
    x, y = _pair(x, y)
    return scale * cdist(x.vectors, y.vectors, "sqeuclidean")


def dtw(x, y) -> float:
    """Dynamic time warping cost with moves down, right and diagonal.

    ``r(i, j) = c(i, j) + min(r(i-1, j), r(i, j-1), r(i-1, j-1))`` and
    ``r(1, 1) = c(1, 1)``.
    """
    c = cost_matrix(x, y)
    n, m = c.shape
    r = np.full((n + 1, m + 1), np.inf)
    r[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            r[i, j] = c[i - 1, j - 1] + min(r[i - 1, j], r[i, j - 1], r[i - 1, j - 1])
    return float(r[n, m])


def softmin(values, gamma_s: float) -> float:
    """``-gamma_s * log(sum(exp(-v / gamma_s)))``, shifted by the minimum for stability."""
    values = np.asarray(values, dtype=np.float64)
    lo = values.min()
    if lo == np.inf:
        return math.inf
    return float(lo - gamma_s * math.log(np.sum(np.exp(-(values - lo) / gamma_s))))


def soft_dtw(x, y, gamma_s: float = 1.0) -> float:
    """Soft-DTW: the DTW recursion with :func:`softmin` in place of ``min``.

    Equals ``-gamma_s * log(sum_A exp(-<A, C> / gamma_s))`` over all
    monotonic alignments, so it is never larger than :func:`dtw`.
    """
    if not (math.isfinite(gamma_s) and gamma_s > 0):
        raise InvalidArgumentError(f"gamma_s must be > 0, got {gamma_s}")
    c = cost_matrix(x, y)
    n, m = c.shape
    r = np.full((n + 1, m + 1), np.inf)
    r[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            prev = (r[i - 1, j], r[i, j - 1], r[i - 1, j - 1])
            r[i, j] = c[i - 1, j - 1] + softmin(prev, gamma_s)
    return float(r[n, m])


def linear_assignment(cost) -> tuple[np.ndarray, float]:
    """Minimum-cost perfect matching on a square cost matrix.

    Shortest augmenting paths with row/column potentials (the O(n^3)
    Hungarian method). Returns ``(col_of_row, total_cost)``.
    """
    cost = np.asarray(cost, dtype=np.float64)
    n = cost.shape[0]
    if cost.ndim != 2 or cost.shape[1] != n:
        raise InvalidArgumentError(f"assignment needs a square matrix, got {cost.shape}")
    # 1-based potentials; column 0 is a virtual start node
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    row_of_col = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        row_of_col[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            free = ~used[1:]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            cand = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(cand)) + 1
            delta = cand[j1 - 1]
            u[row_of_col[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if row_of_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            row_of_col[j0] = row_of_col[j1]
            j0 = j1
    col_of_row = np.empty(n, dtype=np.int64)
    col_of_row[row_of_col[1:] - 1] = np.arange(n)
    total = math.fsum(cost[np.arange(n), col_of_row].tolist())
    return col_of_row, total


def _transport_lp(c: np.ndarray) -> float:
    n, m = c.shape
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate([np.full(n, 1.0 / n), np.full(m, 1.0 / m)])
    res = linprog(c.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise DegenerateInputError(f"transport LP failed: {res.message}")
    return float(res.fun)


def exact_wasserstein(x, y) -> float:
    """Squared-Euclidean optimal transport cost between uniform empirical measures.

    Equal lengths reduce to an assignment problem (value divided by ``N``);
    unequal lengths are solved as the transport LP with marginals ``1/N`` and
    ``1/M``.
    """
    c = cost_matrix(x, y, scale=1.0)
    n, m = c.shape
    if n == m:
        return linear_assignment(c)[1] / n
    return max(_transport_lp(c), 0.0)


def cosine_meanpool(x, y) -> float:
    """Cosine similarity of the mean vectors of ``x`` and ``y``."""
    x, y = _pair(x, y)
    mx = x.vectors.mean(axis=0)
    my = y.vectors.mean(axis=0)
    nx = np.linalg.norm(mx)
    ny = np.linalg.norm(my)
    if nx == 0.0 or ny == 0.0:
        raise DegenerateInputError("mean-pooled vector has zero norm")
    return float(np.clip(np.dot(mx, my) / (nx * ny), -1.0, 1.0))
