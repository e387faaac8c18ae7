"""Positional augmentation of sequences and the temporal-similarity score.

Each vector ``z^n`` becomes ``concat(z^n, beta * pos(n))`` so that the
projected transport cost also pays for moving mass between positions.
Without augmentation the kernels only see the set of vectors and are blind
to order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .core import (
    EmbeddingSequence,
    InvalidArgumentError,
    as_sequence,
    project_sequence,
    wasserstein_1d,
)
from .kernels import KernelConfig, ProjectionSet, usw_rbf_hat

__all__ = [
    "MODES",
    "POSITION_SPAN",
    "PositionalConfig",
    "default_pe_dim",
    "pos_absolute",
    "pos_rotary",
    "position_indices",
    "augment",
    "temporal_projection_set",
    "temporal_score",
    "temporal_decomposition",
]

MODES = ("none", "absolute", "rotary")
# Normalised positions are spread over [0, POSITION_SPAN - 1] for every length.
POSITION_SPAN = 100


def default_pe_dim(d: int) -> int:
    """``min(d, 64)`` rounded down to an even number, at least 2."""
    return max(2, (min(int(d), 64) // 2) * 2)


@dataclass(frozen=True)
class PositionalConfig:
    """How positions are encoded and appended.

    ``k=None`` resolves to :func:`default_pe_dim` of the embedding dimension.
    """

    mode: str = "rotary"
    k: Optional[int] = None
    beta: float = 1.0
    base: float = 10000.0
    normalize_positions: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidArgumentError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.k is not None:
            _check_k(self.k)
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise InvalidArgumentError(f"beta must be >= 0, got {self.beta}")
        if not (math.isfinite(self.base) and self.base > 0):
            raise InvalidArgumentError(f"base must be > 0, got {self.base}")

    def resolved_k(self, d: int) -> int:
        return default_pe_dim(d) if self.k is None else int(self.k)


def _check_k(k) -> int:
    if int(k) != k or k < 2 or int(k) % 2:
        raise InvalidArgumentError(f"encoding dimension k must be a positive even integer, got {k}")
    return int(k)


def _frequencies(k: int, base: float) -> np.ndarray:
    i = np.arange(k // 2)
    return base ** (-2.0 * i / k)


def pos_absolute(n, k: int, base: float = 10000.0) -> np.ndarray:
    """Sinusoidal encoding: ``(sin(n w_0), cos(n w_0), sin(n w_1), ...)``
    with ``w_i = base^(-2i/k)``.
    """
    k = _check_k(k)
    angles = float(n) * _frequencies(k, base)
    out = np.empty(k)
    out[0::2] = np.sin(angles)
    out[1::2] = np.cos(angles)
    return out


def pos_rotary(n, k: int, base: float = 10000.0) -> np.ndarray:
    """Rotary rotation at position ``n`` applied to the base vector ``(1, 0, 1, 0, ...)``.

    Pair ``i`` is ``(cos(n theta_i), sin(n theta_i))`` with
    ``theta_i = base^(-2i/k)``, so every pair has unit norm and
    ``||pos(n)||^2 = k/2`` at every position.
    """
    k = _check_k(k)
    angles = float(n) * _frequencies(k, base)
    out = np.empty(k)
    out[0::2] = np.cos(angles)
    out[1::2] = np.sin(angles)
    return out


_ENCODERS = {"absolute": pos_absolute, "rotary": pos_rotary}


def position_indices(length: int, normalize: bool) -> np.ndarray:
    """Positions fed to the encoder for a sequence of ``length`` vectors.

    Raw mode uses ``0..N-1`` (the first vector sits at angle 0). Normalised
    mode rescales them onto ``[0, POSITION_SPAN - 1]`` so sequences of
    different lengths share a position scale.
    """
    idx = np.arange(length, dtype=np.float64)
    if not normalize:
        return idx
    if length == 1:
        return np.zeros(1)
    return idx * (POSITION_SPAN - 1) / (length - 1)


def _position_block(length: int, cfg: PositionalConfig, k: int) -> np.ndarray:
    encode = _ENCODERS[cfg.mode]
    positions = position_indices(length, cfg.normalize_positions)
    return cfg.beta * np.stack([encode(n, k, cfg.base) for n in positions])


def augment(seq, cfg: PositionalConfig) -> EmbeddingSequence:
    """Append ``beta * pos(n)`` to every vector; result has dimension ``d + k``."""
    if cfg.mode == "none":
        raise InvalidArgumentError("augment called with mode='none'; skip augmentation instead")
    seq = as_sequence(seq)
    k = cfg.resolved_k(seq.dim)
    block = _position_block(seq.length, cfg, k)
    return EmbeddingSequence(np.hstack([seq.vectors, block]))


def temporal_projection_set(d: int, kcfg: KernelConfig, pcfg: PositionalConfig) -> ProjectionSet:
    """Directions on the sphere of the (possibly augmented) working dimension."""
    dim = d if pcfg.mode == "none" else d + pcfg.resolved_k(d)
    return kcfg.projection_set(dim)


def temporal_score(x, y, kcfg: KernelConfig, pcfg: PositionalConfig, proj: Optional[ProjectionSet] = None) -> float:
    """USW-RBF similarity of the position-augmented sequences, with ``p = 2``.

    ``kcfg.p`` is ignored: the temporal score is always the quadratic cost.
    If ``proj`` is omitted it is drawn from ``kcfg.seed`` in dimension
    ``d + k`` (or ``d`` when ``pcfg.mode == 'none'``).
    """
    x = as_sequence(x)
    y = as_sequence(y)
    if x.dim != y.dim:
        raise InvalidArgumentError(f"sequence dimensions differ: {x.dim} vs {y.dim}")
    kcfg = replace(kcfg, p=2.0)
    if proj is None:
        proj = temporal_projection_set(x.dim, kcfg, pcfg)
    if pcfg.mode != "none":
        x = augment(x, pcfg)
        y = augment(y, pcfg)
    return usw_rbf_hat(x, y, kcfg, proj)


def temporal_decomposition(x, y, direction, gamma: float, pcfg: PositionalConfig) -> dict:
    """Split one projected quadratic cost into feature and position parts.

    For equal lengths and a direction ``psi = concat(psi_f, psi_p)``, the
    augmented supports are sorted along ``psi``; with ``sigma_x``,
    ``sigma_y`` the sorting permutations,

        K1_i = psi_f.z_x[sigma_x(i)] - psi_f.z_y[sigma_y(i)]
        K2_i = psi_p.pos_x[sigma_x(i)] - psi_p.pos_y[sigma_y(i)]

    and the per-direction kernel term is
    ``exp(-gamma * mean_i(K1^2 + 2 K1 K2 + K2^2))``. The returned dict holds
    ``k1``, ``k2``, ``separated`` (from the expansion) and ``direct`` (from
    :func:`wasserstein_1d` on the augmented vectors).
    """
    x = as_sequence(x)
    y = as_sequence(y)
    if x.length != y.length:
        raise InvalidArgumentError("the decomposition is defined for equal lengths only")
    if x.dim != y.dim:
        raise InvalidArgumentError(f"sequence dimensions differ: {x.dim} vs {y.dim}")
    if pcfg.mode == "none":
        raise InvalidArgumentError("the decomposition needs a positional mode")
    ax = augment(x, pcfg)
    ay = augment(y, pcfg)
    direction = np.asarray(direction, dtype=np.float64)
    d = x.dim
    a = project_sequence(ax, direction)
    b = project_sequence(ay, direction)
    sx = np.argsort(a, kind="stable")
    sy = np.argsort(b, kind="stable")
    feat_x = x.vectors @ direction[:d]
    feat_y = y.vectors @ direction[:d]
    pos_x = ax.vectors[:, d:] @ direction[d:]
    pos_y = ay.vectors[:, d:] @ direction[d:]
    k1 = feat_x[sx] - feat_y[sy]
    k2 = pos_x[sx] - pos_y[sy]
    separated = math.exp(-gamma * np.mean(k1 * k1 + 2.0 * k1 * k2 + k2 * k2))
    direct = math.exp(-gamma * wasserstein_1d(a, b, 2.0))
    return {"k1": k1, "k2": k2, "separated": separated, "direct": direct}
