"""
Simulated error versus the closed-form MSE
==========================================

Pushes correlated complex Gaussian sources and noise through ``y = H A x + n``,
estimates ``s = Q x`` with the LMMSE receiver and compares the average squared
error with the analytic value.
"""

import numpy as np

from aircomp import SystemConfig, build_covariances, build_Q, design_proposed, lmmse_matrix
from aircomp.montecarlo import sample_channel, sample_complex_gaussian
from aircomp.receiver import estimate

rng = np.random.default_rng(3)
cfg = SystemConfig(n=8, m=2, r=16, K=10, snr_db=15)
cov = build_covariances(cfg)
Q = build_Q(cfg.n, cfg.K)
H = sample_channel(cfg.r, cfg.mK, rng)

pre = design_proposed(cfg, cov.data_cov, cov.noise_cov, H)
rec = lmmse_matrix(pre, H, cov.data_cov, cov.noise_cov, Q)

Z = 20_000
x = sample_complex_gaussian(cov.data_cov, rng, size=Z)
noise = sample_complex_gaussian(cov.noise_cov, rng, size=Z)
err = np.sum(np.abs(estimate(rec, H @ pre.A @ x + noise) - Q @ x) ** 2, axis=0)

print(f"simulated  {err.mean():.4f} +- {err.std(ddof=1) / np.sqrt(Z):.4f}")
print(f"analytic   {pre.predicted_mse:.4f}")
