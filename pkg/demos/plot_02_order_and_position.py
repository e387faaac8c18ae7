"""
Giving the kernel a sense of order
==================================

Without positions the kernel sees a set, so a sequence and its reversal
are identical. Appending a positional code to every vector breaks the tie.
"""

import numpy as np

from swkernel import KernelConfig, PositionalConfig, temporal_score

rng = np.random.default_rng(3)
x = np.cumsum(rng.normal(size=(10, 3)), axis=0)
rev = x[::-1]
kcfg = KernelConfig(gamma=1.0, projections=256, seed=0)

for mode in ("none", "absolute", "rotary"):
    pcfg = PositionalConfig(mode)
    print(f"{mode:>8}: self {temporal_score(x, x, kcfg, pcfg):.4f}"
          f"  reversed {temporal_score(x, rev, kcfg, pcfg):.4f}")

###############################################################################
# ``beta`` scales the positional part against the content part.

for beta in (0.25, 1.0, 4.0):
    pcfg = PositionalConfig("rotary", beta=beta)
    print(f"beta={beta}: reversed {temporal_score(x, rev, kcfg, pcfg):.4f}")
