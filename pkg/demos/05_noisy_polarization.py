"""
What noise does to a repeated X gate
====================================

The polarization <Z> after d imperfect X gates is the telltale curve
for every error source: coherent miscalibration wobbles it,
environmental flips damp it, readout bias squashes it, and finite
shots scatter it.
"""

import numpy as np

from qsimlab.noise import (
    MeasurementErrorModel,
    SamplingPlan,
    apply_measurement_bias,
    z_curve_environment,
    z_curve_full,
    z_curve_miscalibrated,
    z_curve_noiseless,
)

d = np.arange(31)

z0 = z_curve_noiseless(30)
print("noiseless: alternates +1/-1 exactly ->", z0[:6])

# over-rotation by eps per gate beats at frequency eps
eps = 0.1
zm = z_curve_miscalibrated(eps, 30)
print("\nmiscalibrated eps=0.1 vs cos(d(pi+eps)): max |diff| =",
      np.max(np.abs(zm - np.cos(d * (np.pi + eps)))))

# an iid flip channel turns the envelope into a power law
p_e = 0.05
ze = z_curve_environment(p_e, 30)
print("environment p=0.05 vs (2p-1)^d: max |diff| =",
      np.max(np.abs(ze - (2 * p_e - 1) ** d)))

# readout bias is an affine map on the excitation probability
meter = MeasurementErrorModel(mu=0.03, nu=0.07)
for p in (0.0, 0.5, 1.0):
    print(f"p = {p:.1f} reads as {apply_measurement_bias(p, meter):.3f}")

# the full pipeline stacks everything and samples N shots per depth
curve = z_curve_full(0.1, 0.007, meter, SamplingPlan(n_shots=50), 30,
                     rng=np.random.default_rng(3))
print("\n d   exact      sampled    biased")
for i in (0, 5, 10, 20, 30):
    print(f"{curve.depth[i]:3d}  {curve.z_exact[i]:+.5f}  "
          f"{curve.z_sampled[i]:+.5f}  {curve.z_biased[i]:+.5f}")

# shot noise variance is p(1-p)/N, visible by resampling one depth
from qsimlab.noise import sample_polarization

p_d, n = 0.3, 100
samples = [sample_polarization(p_d, SamplingPlan(n, seed)) for seed in range(2000)]
print("\nempirical var", round(np.var(samples), 6),
      "vs p(1-p)/N =", p_d * (1 - p_d) / n)
