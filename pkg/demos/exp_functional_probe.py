"""Exponential functional of drifted Brownian motion and the dependence report against the exit level."""

import math

import numpy as np

from slitbm.hyperbolic import calibration_probe, conjecture_probe, exp_functional_mean, sample_exp_functional

mu, y = 2.0, 1.0
A, _ = sample_exp_functional(mu, y, np.random.default_rng(0), 50_000)
print(f"E A(inf): sampled {A.mean():.4f} +- {A.std() / math.sqrt(A.size):.4f}, closed form {exp_functional_mean(mu, y):.4f}")

rep = conjecture_probe(mu, y, 50_000, seed=0, n_boot=100)
print(f"probe: n={rep.n} dropped={rep.meta['not_exited']}")
print(f"  pearson  {rep.pearson:+.4f}  CI {rep.pearson_ci[0]:+.4f} .. {rep.pearson_ci[1]:+.4f}")
print(f"  spearman {rep.spearman:+.4f}  CI {rep.spearman_ci[0]:+.4f} .. {rep.spearman_ci[1]:+.4f}")
print(f"  null band +-{rep.null_halfwidth:.4f}, chi2 p = {rep.chi2_pvalue:.3g}")
cal = calibration_probe(50_000, seed=0, n_boot=100)
print(f"calibration (independent inputs) inside null band: {cal.within_null()}")
