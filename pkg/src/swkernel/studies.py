"""Desk-scale studies of the USW-RBF estimator on synthetic sequences.

* :func:`unbiasedness_study` - mean of the single-direction estimator
  against a high-accuracy reference.
* :func:`rate_study` - RMSE against the reference as the number of
  projections grows, with a log-log slope fit.
* :func:`psd_study` - smallest Gram eigenvalue with shared projections.
* :func:`ablation_study` - synthetic reranking accuracy over a bandwidth
  and projection-count grid.

Every random draw comes from a seed derived from ``(study seed, stream,
cell, replicate)``, so results do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .core import (
    EmbeddingSequence,
    InvalidArgumentError,
    _sorted_rows,
    as_sequence,
    derive_seed,
    project_many,
    sample_projections,
    wasserstein_1d,
    wasserstein_1d_batch,
)
from .kernels import KernelConfig, _exp_neg, _mean, gram
from .positional import PositionalConfig
from .rerank import Candidate, CandidateSet, rerank_usw

__all__ = [
    "DEFAULT_GAMMA_GRID",
    "DEFAULT_L_GRID",
    "RATE_L_GRID",
    "StudyConfig",
    "StudyResult",
    "gen_synthetic",
    "reference_kernel",
    "fit_loglog_slope",
    "unbiasedness_study",
    "rate_study",
    "psd_study",
    "ablation_study",
]

DEFAULT_GAMMA_GRID = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
DEFAULT_L_GRID = (10, 50, 100)
RATE_L_GRID = (4, 16, 64, 256, 1024)
REFERENCE_L = 100_000

# seed streams
_PAIR, _REFERENCE, _UNBIASED, _RATE, _PSD, _ABLATION = range(6)


@dataclass(frozen=True)
class StudyConfig:
    replicates: int = 200
    L_grid: tuple = DEFAULT_L_GRID
    gamma_grid: tuple = DEFAULT_GAMMA_GRID
    seed: int = 0
    d: int = 8
    lengths: tuple = (10, 10)
    p: float = 2.0
    count: int = 8
    reference_L: int = REFERENCE_L

    def __post_init__(self):
        object.__setattr__(self, "L_grid", tuple(int(v) for v in self.L_grid))
        object.__setattr__(self, "gamma_grid", tuple(float(v) for v in self.gamma_grid))
        object.__setattr__(self, "lengths", tuple(int(v) for v in self.lengths))
        if not self.L_grid or not self.gamma_grid:
            raise InvalidArgumentError("L_grid and gamma_grid must be non-empty")
        if any(v < 1 for v in self.L_grid):
            raise InvalidArgumentError("L_grid entries must be >= 1")
        if any(not (math.isfinite(g) and g > 0) for g in self.gamma_grid):
            raise InvalidArgumentError("gamma_grid entries must be > 0")
        if self.replicates < 2:
            raise InvalidArgumentError("replicates must be >= 2")
        if self.d < 1 or self.count < 1 or self.reference_L < 1:
            raise InvalidArgumentError("d, count and reference_L must be >= 1")
        if len(self.lengths) != 2 or min(self.lengths) < 1:
            raise InvalidArgumentError("lengths must be a pair of positive integers (N, M)")
        if self.p < 1:
            raise InvalidArgumentError("p must be >= 1")


@dataclass
class StudyResult:
    study: str
    cells: list
    summary: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"study": self.study, "config": self.config, "summary": self.summary, "cells": self.cells}


def gen_synthetic(seed: int, count: int, d: int, length_range) -> list:
    """Gaussian random walks started at the origin.

    Each sequence takes unit-variance steps, so its first vector is a single
    step away from zero. Lengths are uniform on the inclusive range
    ``length_range = (lo, hi)`` (an int means a fixed length).
    """
    if isinstance(length_range, (int, np.integer)):
        length_range = (int(length_range), int(length_range))
    lo, hi = (int(v) for v in length_range)
    if count < 1 or d < 1:
        raise InvalidArgumentError("count and d must be >= 1")
    if lo < 1 or hi < lo:
        raise InvalidArgumentError(f"invalid length range ({lo}, {hi})")
    rng = np.random.default_rng(int(seed) & ((1 << 64) - 1))
    lengths = rng.integers(lo, hi + 1, size=count)
    return [EmbeddingSequence(np.cumsum(rng.standard_normal((n, d)), axis=0)) for n in lengths]


def _study_pair(cfg: StudyConfig):
    n, m = cfg.lengths
    x = gen_synthetic(derive_seed(cfg.seed, _PAIR, 0), 1, cfg.d, n)[0]
    y = gen_synthetic(derive_seed(cfg.seed, _PAIR, 1), 1, cfg.d, m)[0]
    return x, y


def _costs(x, y, directions, p) -> np.ndarray:
    a = _sorted_rows(project_many(x, directions))
    b = _sorted_rows(project_many(y, directions))
    return wasserstein_1d_batch(a, b, p)


def _order_breaks(vectors: np.ndarray) -> list:
    # angles in [0, pi) where two points of a planar set project equally
    out = []
    n = vectors.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            dx, dy = vectors[i] - vectors[j]
            if dx == 0.0 and dy == 0.0:
                continue
            out.append((math.atan2(dy, dx) + math.pi / 2) % math.pi)
    return out


def _planar_reference(x, y, gamma, p) -> float:
    def integrand(theta):
        direction = np.array([[math.cos(theta), math.sin(theta)]])
        return math.exp(-gamma * _costs(x, y, direction, p)[0])

    # the integrand is smooth between angles where either sort order changes
    breaks = sorted({0.0, math.pi, *_order_breaks(x.vectors), *_order_breaks(y.vectors)})
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi > lo:
            total += integrate.quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
    return total / math.pi


_REFERENCE_CACHE: dict = {}


def reference_kernel(x, y, gamma: float, p: float = 2.0, seed: int = 0,
                     reference_L: int = REFERENCE_L) -> float:
    """High-accuracy value of the USW-RBF kernel for one pair.

    Exact in one dimension, adaptive quadrature over the half circle in two,
    and a ``reference_L``-direction Monte Carlo average (seed stream disjoint
    from every replicate) otherwise. Results are cached on the inputs.
    """
    x = as_sequence(x)
    y = as_sequence(y)
    key = (x.vectors.shape, x.vectors.tobytes(), y.vectors.shape, y.vectors.tobytes(),
           float(gamma), float(p), int(seed), int(reference_L))
    if key in _REFERENCE_CACHE:
        return _REFERENCE_CACHE[key]
    if x.dim == 1:
        value = math.exp(-gamma * wasserstein_1d(x.vectors[:, 0], y.vectors[:, 0], p))
    elif x.dim == 2:
        value = _planar_reference(x, y, gamma, p)
    else:
        proj = sample_projections(x.dim, reference_L, derive_seed(seed, _REFERENCE))
        value = math.fsum(np.exp(-gamma * _costs(x, y, proj.directions, p)).tolist()) / reference_L
    _REFERENCE_CACHE[key] = value
    return value


def fit_loglog_slope(L_values: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of ``log(error)`` against ``log(L)``."""
    lx = np.log(np.asarray(L_values, dtype=np.float64))
    ly = np.log(np.asarray(errors, dtype=np.float64))
    lx_c = lx - lx.mean()
    return float(np.sum(lx_c * (ly - ly.mean())) / np.sum(lx_c * lx_c))


def _replicate_directions(cfg: StudyConfig, stream: int, L: int) -> np.ndarray:
    return np.concatenate([
        sample_projections(cfg.d, L, derive_seed(cfg.seed, stream, L, r)).directions
        for r in range(cfg.replicates)
    ])


def _replicate_estimates(costs: np.ndarray, gamma: float, L: int) -> np.ndarray:
    terms = _exp_neg(gamma, costs).reshape(-1, L)
    return np.array([_mean(row) for row in terms])


def _sample_std(values: np.ndarray) -> float:
    # np.std of identical values can come out as a few ulps instead of 0
    if np.all(values == values[0]):
        return 0.0
    return float(np.std(values, ddof=1))


def _base_config(cfg: StudyConfig) -> dict:
    out = asdict(cfg)
    out["L_grid"] = list(cfg.L_grid)
    out["gamma_grid"] = list(cfg.gamma_grid)
    out["lengths"] = list(cfg.lengths)
    return out


def unbiasedness_study(cfg: StudyConfig, pair=None) -> StudyResult:
    """Standardised deviation of the mean single-direction estimate from the reference.

    For each bandwidth, ``replicates`` independent one-direction estimates
    are averaged and compared to :func:`reference_kernel`:
    ``deviation = (mean - reference) / (std / sqrt(R))``. When every
    estimate is identical (``d = 1`` or identical inputs) the deviation is 0
    if they equal the reference.
    """
    x, y = _study_pair(cfg) if pair is None else (as_sequence(pair[0]), as_sequence(pair[1]))
    if x.dim != cfg.d or y.dim != cfg.d:
        raise InvalidArgumentError("pair dimension does not match cfg.d")
    costs = _costs(x, y, _replicate_directions(cfg, _UNBIASED, 1), cfg.p)
    cells = []
    for gamma in cfg.gamma_grid:
        est = _replicate_estimates(costs, gamma, 1)
        ref = reference_kernel(x, y, gamma, cfg.p, cfg.seed, cfg.reference_L)
        mean = math.fsum(est.tolist()) / est.size
        std = _sample_std(est)
        if std == 0.0:
            deviation = 0.0 if np.all(est == ref) else math.copysign(math.inf, mean - ref)
        else:
            deviation = (mean - ref) / (std / math.sqrt(est.size))
        cells.append({"gamma": gamma, "L": 1, "mean": mean, "std": std,
                      "reference": ref, "deviation": deviation})
    worst = max(abs(c["deviation"]) for c in cells)
    return StudyResult("unbiasedness", cells, {"max_abs_deviation": worst}, _base_config(cfg))


def rate_study(cfg: StudyConfig, pair=None) -> StudyResult:
    """RMSE of the L-direction estimator against the reference over ``L_grid``.

    Reports per cell the mean, std, RMSE and the Monte Carlo prediction
    ``sqrt(Var[exp(-gamma W)] / L)``, and per bandwidth the fitted log-log
    slope. A slope is ``None`` (and ``degenerate`` true) when some RMSE is 0,
    e.g. in one dimension or for identical inputs.
    """
    grid = sorted(set(cfg.L_grid))
    if len(grid) < 4 or grid[-1] < 100 * grid[0]:
        raise InvalidArgumentError("L_grid needs at least 4 values spanning at least 2 decades")
    x, y = _study_pair(cfg) if pair is None else (as_sequence(pair[0]), as_sequence(pair[1]))
    if x.dim != cfg.d or y.dim != cfg.d:
        raise InvalidArgumentError("pair dimension does not match cfg.d")
    costs = {L: _costs(x, y, _replicate_directions(cfg, _RATE, L), cfg.p) for L in grid}
    cells = []
    slopes = {}
    for gamma in cfg.gamma_grid:
        ref = reference_kernel(x, y, gamma, cfg.p, cfg.seed, cfg.reference_L)
        single_var = float(np.var(np.exp(-gamma * costs[grid[-1]]), ddof=1))
        rmses = []
        for L in grid:
            est = _replicate_estimates(costs[L], gamma, L)
            rmse = math.sqrt(math.fsum(((est - ref) ** 2).tolist()) / est.size)
            rmses.append(rmse)
            cells.append({"gamma": gamma, "L": L, "mean": float(np.mean(est)),
                          "std": _sample_std(est), "rmse": rmse,
                          "predicted_rmse": math.sqrt(single_var / L), "reference": ref})
        slopes[gamma] = None if min(rmses) == 0.0 else fit_loglog_slope(grid, rmses)
    summary = {
        "L_grid": grid,
        "slopes": [{"gamma": g, "slope": s} for g, s in slopes.items()],
        "slope": slopes[cfg.gamma_grid[0]],
        "degenerate": any(s is None for s in slopes.values()),
    }
    return StudyResult("rate", cells, summary, _base_config(cfg))


def psd_study(cfg: StudyConfig, seqs=None) -> StudyResult:
    """Smallest eigenvalue of USW-RBF Gram matrices over synthetic sequences.

    Uses ``cfg.count`` random walks with lengths in ``cfg.lengths`` unless
    ``seqs`` is given; one cell per ``(gamma, L)``.
    """
    if seqs is None:
        length_range = (min(cfg.lengths), max(cfg.lengths))
        seqs = gen_synthetic(derive_seed(cfg.seed, _PSD), cfg.count, cfg.d, length_range)
    seqs = [as_sequence(s) for s in seqs]
    cells = []
    for gamma in cfg.gamma_grid:
        for L in cfg.L_grid:
            kcfg = KernelConfig(gamma=gamma, p=cfg.p, projections=L, seed=derive_seed(cfg.seed, _PSD, L))
            g = gram(seqs, kcfg)
            eig = np.linalg.eigvalsh(0.5 * (g.entries + g.entries.T))
            cells.append({"gamma": gamma, "L": L, "min_eigenvalue": float(eig[0]),
                          "max_eigenvalue": float(eig[-1]),
                          "max_asymmetry": float(np.max(np.abs(g.entries - g.entries.T)))})
    summary = {"n": len(seqs), "min_eigenvalue": min(c["min_eigenvalue"] for c in cells)}
    return StudyResult("psd", cells, summary, _base_config(cfg))


def _ablation_task(seed: int, d: int, n: int, distractors: int, noise: float):
    rng = np.random.default_rng(seed)
    anchor = np.cumsum(rng.standard_normal((n, d)), axis=0)
    target = anchor + noise * rng.standard_normal((n, d))
    cands = [("target", target), ("reversed", target[::-1].copy())]
    for k in range(distractors):
        cands.append((f"distractor{k}", np.cumsum(rng.standard_normal((n, d)), axis=0)))
    order = rng.permutation(len(cands))
    likelihood = 0.05 * rng.standard_normal(len(cands))
    return anchor, [Candidate(cands[i][0], cands[i][1], float(likelihood[j])) for j, i in enumerate(order)]


def ablation_study(cfg: StudyConfig, pcfg: Optional[PositionalConfig] = None, alpha: float = 0.5,
                   distractors: int = 3, noise: float = 0.3) -> StudyResult:
    """Reranking accuracy on synthetic tasks over the ``gamma_grid x L_grid`` table.

    Each replicate has an anchor random walk; the candidates are a noisy
    copy of it, the same copy in reverse order, and independent walks, all
    with uninformative likelihoods. A cell reports how often the noisy copy
    wins.
    """
    pcfg = PositionalConfig("rotary") if pcfg is None else pcfg
    tasks = [_ablation_task(derive_seed(cfg.seed, _ABLATION, r), cfg.d, cfg.lengths[0], distractors, noise)
             for r in range(cfg.replicates)]
    cells = []
    for gamma in cfg.gamma_grid:
        for L in cfg.L_grid:
            wins = 0
            reversed_wins = 0
            for r, (anchor, cands) in enumerate(tasks):
                kcfg = KernelConfig(gamma=gamma, p=2.0, projections=L, seed=derive_seed(cfg.seed, _ABLATION, L, r))
                report = rerank_usw(CandidateSet(anchor, cands, alpha), kcfg, pcfg)
                wins += report.winner_id == "target"
                reversed_wins += report.winner_id == "reversed"
            cells.append({"gamma": gamma, "L": L, "accuracy": wins / len(tasks),
                          "reversed_rate": reversed_wins / len(tasks)})
    best = max(cells, key=lambda c: c["accuracy"])
    summary = {"best_gamma": best["gamma"], "best_L": best["L"], "best_accuracy": best["accuracy"],
               "pe": pcfg.mode, "alpha": alpha}
    return StudyResult("ablation", cells, summary, _base_config(cfg))
