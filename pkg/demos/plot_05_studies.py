"""
Checking the estimator empirically
==================================

A single projection already gives an unbiased estimate of the kernel,
and its error shrinks like ``1/sqrt(L)``. Gram matrices stay positive
semi-definite for every bandwidth.
"""

from swkernel.studies import RATE_L_GRID, StudyConfig, psd_study, rate_study, unbiasedness_study

res = unbiasedness_study(StudyConfig(replicates=2000, d=8, gamma_grid=(1.0,)))
print("standardised deviation:", res.cells[0]["deviation"])

res = rate_study(StudyConfig(replicates=200, d=8, L_grid=RATE_L_GRID, gamma_grid=(1.0,)))
for cell in res.cells:
    print(f"L={cell['L']:>5}  rmse {cell['rmse']:.2e}  predicted {cell['predicted_rmse']:.2e}")
print("log-log slope:", res.summary["slope"])

res = psd_study(StudyConfig(gamma_grid=(0.5, 2.5), L_grid=(512,), d=3, count=8, lengths=(3, 12)))
print("smallest eigenvalue:", res.summary["min_eigenvalue"])
