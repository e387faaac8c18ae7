"""Unbiased sliced-Wasserstein RBF kernels for sequences of embeddings."""

__version__ = "0.1.0"

from .core import (
    DegenerateInputError,
    EmbeddingSequence,
    InvalidArgumentError,
    ProjectionSet,
    project_sequence,
    sample_projections,
    wasserstein_1d,
)
from .kernels import GramMatrix, KernelConfig, gram, sw_hat, sw_rbf_hat, usw_rbf_hat
from .positional import PositionalConfig, augment, pos_absolute, pos_rotary, temporal_score
from .baselines import cosine_meanpool, dtw, exact_wasserstein, soft_dtw
from .rerank import Candidate, CandidateSet, ScoreReport, rerank_cosine, rerank_usw
from .studies import (
    StudyConfig,
    StudyResult,
    ablation_study,
    gen_synthetic,
    psd_study,
    rate_study,
    unbiasedness_study,
)
