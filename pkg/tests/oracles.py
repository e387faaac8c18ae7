"""Independent reference computations used only by the tests.

None of these share code paths with the library: they enumerate, integrate
on a uniform grid, or call scipy solvers directly.
"""

import itertools
import math

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import logsumexp


def brute_force_w1d(a, b, p):
    """min over all pairings of (1/N) sum |a_i - b_sigma(i)|^p (equal sizes)."""
    a = list(a)
    b = list(b)
    assert len(a) == len(b)
    n = len(a)
    return min(sum(abs(a[i] - b[s[i]]) ** p for i in range(n)) / n
               for s in itertools.permutations(range(n)))


def quantile_grid_w1d(a, b, p):
    """Midpoint rule on the uniform grid of N*M cells, quantiles from numpy.

    Both quantile functions are constant on every cell of width 1/(N*M), so
    the midpoint rule is exact up to rounding.
    """
    n, m = len(a), len(b)
    cells = n * m
    mids = (np.arange(cells) + 0.5) / cells
    qa = np.quantile(np.asarray(a, float), mids, method="inverted_cdf")
    qb = np.quantile(np.asarray(b, float), mids, method="inverted_cdf")
    return math.fsum((np.abs(qa - qb) ** p).tolist()) / cells


def monotonic_paths(n, m):
    """All alignment paths from (0, 0) to (n-1, m-1) with steps down/right/diagonal."""
    def walk(i, j):
        if (i, j) == (n - 1, m - 1):
            yield [(i, j)]
            return
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            ni, nj = i + di, j + dj
            if ni < n and nj < m:
                for rest in walk(ni, nj):
                    yield [(i, j)] + rest
    return list(walk(0, 0))


def half_sq_costs(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    return np.array([[0.5 * float(np.sum((xi - yj) ** 2)) for yj in y] for xi in x])


def brute_force_dtw(x, y):
    c = half_sq_costs(x, y)
    return min(sum(c[i, j] for i, j in path) for path in monotonic_paths(*c.shape))


def brute_force_soft_dtw(x, y, gamma_s):
    c = half_sq_costs(x, y)
    totals = np.array([sum(c[i, j] for i, j in path) for path in monotonic_paths(*c.shape)])
    return float(-gamma_s * logsumexp(-totals / gamma_s))


def brute_force_assignment_w2(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = len(x)
    c = ((x[:, None, :] - y[None, :, :]) ** 2).sum(-1)
    return min(sum(c[i, s[i]] for i in range(n)) for s in itertools.permutations(range(n))) / n


def expanded_assignment_w2(x, y):
    """Unequal sizes: replicate atoms up to lcm(N, M) and solve with scipy."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    k = math.lcm(len(x), len(y))
    xe = np.repeat(x, k // len(x), axis=0)
    ye = np.repeat(y, k // len(y), axis=0)
    c = ((xe[:, None, :] - ye[None, :, :]) ** 2).sum(-1)
    r, s = linear_sum_assignment(c)
    return c[r, s].sum() / k
