"""
Alignment baselines
===================

DTW finds the cheapest monotone alignment; soft-DTW smooths the minimum
and never exceeds it. Exact Wasserstein ignores order entirely.
"""

import numpy as np

from swkernel import cosine_meanpool, dtw, exact_wasserstein, soft_dtw

rng = np.random.default_rng(7)
x = rng.normal(size=(6, 2))
y = np.concatenate([x[:3], x[3:] + 0.1])

print("DTW:       ", dtw(x, y))
for g in (0.01, 0.1, 1.0):
    print(f"soft-DTW {g:<4}", soft_dtw(x, y, g))

###############################################################################
# Reversal leaves the transport cost unchanged but hurts DTW.

print("W2 x vs reversed: ", exact_wasserstein(x, x[::-1]))
print("DTW x vs reversed:", dtw(x, x[::-1]))
print("cosine of means:  ", cosine_meanpool(x + 1.0, y + 1.0))
