"""Candidate selection by likelihood plus sequence similarity.

``rerank_usw`` scores ``(1 - alpha) * likelihood + alpha * temporal_score``;
``rerank_cosine`` is the mean-pooled cosine rule
``likelihood + cosine_meanpool``. Likelihoods are opaque scalars supplied by
the caller; pass length-normalised scores when candidates differ in length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .baselines import cosine_meanpool
from .core import EmbeddingSequence, InvalidArgumentError, as_sequence
from .kernels import KernelConfig
from .positional import PositionalConfig, temporal_projection_set, temporal_score

__all__ = [
    "DEFAULT_ALPHA",
    "Candidate",
    "CandidateSet",
    "CandidateScore",
    "ScoreReport",
    "rerank_usw",
    "rerank_cosine",
]

DEFAULT_ALPHA = 0.5


@dataclass(frozen=True)
class Candidate:
    id: str
    sequence: EmbeddingSequence
    likelihood: float

    def __post_init__(self):
        object.__setattr__(self, "sequence", as_sequence(self.sequence))
        if not math.isfinite(self.likelihood):
            raise InvalidArgumentError(f"candidate {self.id!r} has a non-finite likelihood")


@dataclass(frozen=True)
class CandidateSet:
    anchor: EmbeddingSequence
    candidates: tuple
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        object.__setattr__(self, "anchor", as_sequence(self.anchor))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if not self.candidates:
            raise InvalidArgumentError("a candidate set needs at least one candidate")
        if not (0.0 <= self.alpha <= 1.0):
            raise InvalidArgumentError(f"alpha must lie in [0, 1], got {self.alpha}")
        ids = [c.id for c in self.candidates]
        if len(set(ids)) != len(ids):
            raise InvalidArgumentError("candidate ids must be unique")
        for c in self.candidates:
            if c.sequence.dim != self.anchor.dim:
                raise InvalidArgumentError(
                    f"candidate {c.id!r} has dimension {c.sequence.dim}, anchor has {self.anchor.dim}"
                )


@dataclass(frozen=True)
class CandidateScore:
    id: str
    likelihood: float
    kernel_score: float
    combined: float


@dataclass(frozen=True)
class ScoreReport:
    records: tuple
    winner_id: str
    rule: str = "usw"
    config: dict = field(default_factory=dict)

    @property
    def winner(self) -> CandidateScore:
        return next(r for r in self.records if r.id == self.winner_id)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "winner_id": self.winner_id,
            "candidates": [
                {
                    "id": r.id,
                    "likelihood": r.likelihood,
                    "kernel_score": r.kernel_score,
                    "combined": r.combined,
                }
                for r in self.records
            ],
            "config": dict(self.config),
        }


def _report(records, rule, config) -> ScoreReport:
    # strict '>' keeps the lowest index on ties
    best = 0
    for i, r in enumerate(records):
        if r.combined > records[best].combined:
            best = i
    return ScoreReport(records=tuple(records), winner_id=records[best].id, rule=rule, config=config)


def rerank_usw(cset: CandidateSet, kcfg: KernelConfig, pcfg: PositionalConfig,
               alpha: Optional[float] = None) -> ScoreReport:
    """Pick the candidate maximising ``(1 - alpha) * likelihood + alpha * temporal_score``.

    One projection set, drawn from ``kcfg.seed``, is shared by all candidates.
    ``alpha`` overrides ``cset.alpha`` when given.
    """
    alpha = cset.alpha if alpha is None else float(alpha)
    if not (0.0 <= alpha <= 1.0):
        raise InvalidArgumentError(f"alpha must lie in [0, 1], got {alpha}")
    proj = temporal_projection_set(cset.anchor.dim, kcfg, pcfg)
    records = []
    for c in cset.candidates:
        k = temporal_score(cset.anchor, c.sequence, kcfg, pcfg, proj=proj)
        records.append(CandidateScore(c.id, c.likelihood, k, (1.0 - alpha) * c.likelihood + alpha * k))
    config = {
        "alpha": alpha,
        "gamma": kcfg.gamma,
        "p": 2.0,
        "projections": kcfg.projections,
        "seed": kcfg.seed,
        "pe": pcfg.mode,
        "pe_dim": None if pcfg.mode == "none" else pcfg.resolved_k(cset.anchor.dim),
        "pe_beta": pcfg.beta,
        "normalize_positions": pcfg.normalize_positions,
    }
    return _report(records, "usw", config)


def rerank_cosine(cset: CandidateSet) -> ScoreReport:
    """Pick the candidate maximising ``likelihood + cosine_meanpool(anchor, candidate)``."""
    records = []
    for c in cset.candidates:
        k = cosine_meanpool(cset.anchor, c.sequence)
        records.append(CandidateScore(c.id, c.likelihood, k, c.likelihood + k))
    return _report(records, "cosine", {})
