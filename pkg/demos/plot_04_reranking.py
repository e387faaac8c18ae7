"""
Reranking candidates against an anchor
======================================

Each candidate carries a likelihood from some upstream model. The score
mixes it with the temporal kernel to the anchor, weighted by ``alpha``.
"""

import numpy as np

from swkernel import Candidate, CandidateSet, KernelConfig, PositionalConfig, rerank_cosine, rerank_usw

rng = np.random.default_rng(11)
anchor = np.cumsum(rng.normal(size=(8, 3)), axis=0)
cands = [
    Candidate("reversed", anchor[::-1], -1.0),
    Candidate("noisy", anchor + 0.3 * rng.normal(size=anchor.shape), -1.0),
    Candidate("unrelated", rng.normal(size=(8, 3)), -0.8),
]
cset = CandidateSet(anchor, cands, alpha=0.5)

report = rerank_usw(cset, KernelConfig(seed=0), PositionalConfig("rotary"))
for r in report.records:
    print(f"{r.id:>10}  kernel {r.kernel_score:.4f}  combined {r.combined:.4f}")
print("usw winner:", report.winner_id)

###############################################################################
# Mean pooling cannot tell the reversed copy from the anchor.

print("cosine winner:", rerank_cosine(cset).winner_id)
