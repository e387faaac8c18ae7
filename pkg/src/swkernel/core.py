"""Sequences, sphere sampling, projection and the closed-form 1D Wasserstein cost.

A sequence of embeddings is treated as the uniform empirical distribution
over its vectors. Projecting onto a unit direction gives a 1D empirical
distribution whose p-Wasserstein cost has a closed form through the
quantile functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidArgumentError",
    "DegenerateInputError",
    "EmbeddingSequence",
    "ProjectionSet",
    "as_sequence",
    "derive_seed",
    "sample_projections",
    "project_sequence",
    "project_many",
    "wasserstein_1d",
    "wasserstein_1d_batch",
]

_SEED_MASK = (1 << 64) - 1


class InvalidArgumentError(ValueError):
    """Raised when an argument violates a documented precondition."""


class DegenerateInputError(ArithmeticError):
    """Raised when inputs are well-formed but make a quantity undefined."""


@dataclass(frozen=True, eq=False)
class EmbeddingSequence:
    """Ordered list of ``N`` real vectors of dimension ``d``.

    ``vectors`` is stored as a read-only float64 array of shape ``(N, d)``.
    """

    vectors: np.ndarray

    def __post_init__(self):
        arr = np.array(self.vectors, dtype=np.float64)
        if arr.ndim == 1:
            # a flat list is read as N scalars (d = 1)
            arr = arr[:, None]
        if arr.ndim != 2:
            raise InvalidArgumentError(
                f"vectors must be a 2D array (N, d), got shape {arr.shape}"
            )
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidArgumentError(
                f"a sequence needs N >= 1 vectors of dimension d >= 1, got {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidArgumentError("sequence entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @property
    def length(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other):
        if not isinstance(other, EmbeddingSequence):
            return NotImplemented
        return np.array_equal(self.vectors, other.vectors)

    def __hash__(self):
        return hash((self.vectors.shape, self.vectors.tobytes()))

    def permuted(self, order) -> "EmbeddingSequence":
        return EmbeddingSequence(self.vectors[np.asarray(order)])


def as_sequence(seq) -> EmbeddingSequence:
    """Coerce an array-like or sequence object to :class:`EmbeddingSequence`."""
    if isinstance(seq, EmbeddingSequence):
        return seq
    return EmbeddingSequence(seq)


def derive_seed(seed: int, *keys: int) -> int:
    """Map ``(seed, *keys)`` to an independent 64-bit seed.

    Used to give every replicate or reference computation its own stream,
    so results never depend on the order in which replicates are evaluated.
    """
    ss = np.random.SeedSequence([int(seed) & _SEED_MASK, *[int(k) & _SEED_MASK for k in keys]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class ProjectionSet:
    """``L`` unit directions in ``R^D`` drawn from a seed."""

    directions: np.ndarray
    seed: int = field(default=0)

    @property
    def count(self) -> int:
        return self.directions.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other):
        if not isinstance(other, ProjectionSet):
            return NotImplemented
        return self.seed == other.seed and np.array_equal(self.directions, other.directions)

    def __hash__(self):
        return hash((self.seed, self.directions.tobytes()))


def sample_projections(dim: int, count: int, seed: int) -> ProjectionSet:
    """Draw ``count`` directions uniformly from the unit sphere in ``R^dim``.

    Standard Gaussian vectors are normalised; an all-zero draw is replaced
    by a fresh one. The output is a deterministic function of
    ``(dim, count, seed)``.
    """
    dim = int(dim)
    count = int(count)
    if dim < 1 or count < 1:
        raise InvalidArgumentError(f"dim and count must be >= 1, got dim={dim}, count={count}")
    rng = np.random.default_rng(int(seed) & _SEED_MASK)
    draws = rng.standard_normal((count, dim))
    norms = np.linalg.norm(draws, axis=1)
    bad = np.flatnonzero(norms == 0.0)
    while bad.size:
        draws[bad] = rng.standard_normal((bad.size, dim))
        norms[bad] = np.linalg.norm(draws[bad], axis=1)
        bad = bad[norms[bad] == 0.0]
    if dim == 1:
        # sqrt(x*x) can miss |x| by an ulp; S^0 must be exactly {-1, +1}
        directions = np.sign(draws)
    else:
        directions = draws / norms[:, None]
    directions.setflags(write=False)
    return ProjectionSet(directions=directions, seed=int(seed))


def _project(vectors: np.ndarray, directions: np.ndarray) -> np.ndarray:
    # Explicit accumulation over the feature axis in a fixed order: every
    # projected value is bit-identical no matter where its row sits, which
    # BLAS blocking does not guarantee.
    out = np.zeros((directions.shape[0], vectors.shape[0]))
    for k in range(vectors.shape[1]):
        out += directions[:, k, None] * vectors[None, :, k]
    return out


def project_many(seq, directions) -> np.ndarray:
    """Project every vector of ``seq`` onto each row of ``directions``.

    Returns an array of shape ``(L, N)``; row ``l`` is ``seq`` seen along
    direction ``l``.
    """
    seq = as_sequence(seq)
    if isinstance(directions, ProjectionSet):
        directions = directions.directions
    directions = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    if directions.shape[1] != seq.dim:
        raise InvalidArgumentError(
            f"direction dimension {directions.shape[1]} != sequence dimension {seq.dim}"
        )
    return _project(seq.vectors, directions)


def project_sequence(seq, direction) -> np.ndarray:
    """Inner product of ``direction`` with each vector of ``seq`` (length ``N``)."""
    direction = np.asarray(direction, dtype=np.float64)
    if direction.ndim != 1:
        raise InvalidArgumentError("direction must be a single vector")
    return project_many(seq, direction[None, :])[0]


def _check_order(p: float) -> float:
    p = float(p)
    if not p >= 1.0 or not math.isfinite(p):
        raise InvalidArgumentError(f"order p must be a finite real >= 1, got {p}")
    return p


def _power(diff: np.ndarray, p: float) -> np.ndarray:
    if p == 2.0:
        return diff * diff
    if p == 1.0:
        return diff
    return diff**p


def _sorted_rows(values: np.ndarray) -> np.ndarray:
    return np.sort(values, axis=-1, kind="stable")


def _quantile_segments(n: int, m: int):
    """Segments of the merged grid {i/n} u {j/m} on [0, 1].

    Breakpoints are kept as integers over the common denominator ``n*m`` so
    the segment boundaries are exact.
    """
    marks = np.union1d(np.arange(n + 1) * m, np.arange(m + 1) * n)
    starts = marks[:-1]
    ia = starts // m
    ib = starts // n
    weights = np.diff(marks) / (n * m)
    return ia, ib, weights


def wasserstein_1d_batch(a_sorted: np.ndarray, b_sorted: np.ndarray, p: float = 2.0) -> np.ndarray:
    """Row-wise ``W_p^p`` for already-sorted projected supports.

    Parameters
    ----------
    a_sorted : array, shape (L, N)
        Each row sorted ascending.
    b_sorted : array, shape (L, M)
        Each row sorted ascending.
    p : float
        Cost exponent, ``p >= 1``.

    Returns
    -------
    array, shape (L,)
        The exact quantile integral per row. Terms are sorted before summing,
        so the value depends only on the multiset of terms (this is what
        makes permutation and sign invariance hold bit-for-bit).
    """
    n = a_sorted.shape[-1]
    m = b_sorted.shape[-1]
    if n == m:
        terms = _power(np.abs(a_sorted - b_sorted), p)
        return _sorted_rows(terms).sum(axis=-1) / n
    ia, ib, weights = _quantile_segments(n, m)
    terms = weights * _power(np.abs(a_sorted[..., ia] - b_sorted[..., ib]), p)
    return _sorted_rows(terms).sum(axis=-1)


def wasserstein_1d(a, b, p: float = 2.0) -> float:
    """``W_p^p`` between uniform empirical distributions on the reals.

    Computed as the integral over ``z`` in [0, 1] of
    ``|F_a^{-1}(z) - F_b^{-1}(z)|^p``, evaluated exactly on the merged grid
    of atom boundaries. With equal sizes this is the mean of
    ``|a_(i) - b_(i)|^p`` over sorted order.

    >>> wasserstein_1d([0.0], [0.0, 2.0], p=2)
    2.0
    """
    p = _check_order(p)
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise InvalidArgumentError("wasserstein_1d needs non-empty inputs")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidArgumentError("wasserstein_1d needs finite inputs")
    return float(wasserstein_1d_batch(_sorted_rows(a)[None, :], _sorted_rows(b)[None, :], p)[0])
