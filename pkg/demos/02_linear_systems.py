"""
Solving A x = b on the simulator
================================

The quantum linear-systems routine (phase estimation + controlled
rotation + uncompute) against numpy's direct solve. Systems are built
with exact 4-bit spectra so the eigenvalue register reads exactly.
"""

import numpy as np

from qsimlab.algorithms import LinearSystem, hhl
from qsimlab.core import RandomSource, fidelity, random_state

gen = RandomSource(12).generator

# random Hermitian A with eigenvalues k/16, unit-norm b
m = gen.normal(size=(4, 4)) + 1j * gen.normal(size=(4, 4))
q, r = np.linalg.qr(m)
v = q * (np.diag(r) / np.abs(np.diag(r)))
lams = gen.choice(np.arange(1, 16), size=4, replace=False) / 16
A = (v * lams) @ v.conj().T
b = random_state(2, gen)

print("spectrum:", np.sort(lams))

x_hat, p_success = hhl(LinearSystem(A, b), d=4, C=float(lams.min()),
                       rng=RandomSource(13))

x_classical = np.linalg.solve(A, b)
x_classical /= np.linalg.norm(x_classical)

print("post-selection success probability:", round(p_success, 6))
print("fidelity vs classical solve:", fidelity(x_hat, x_classical))

# the answer lives in amplitudes: both solutions agree up to phase
phase = np.vdot(x_classical, x_hat)
phase /= abs(phase)
print("\n  classical        quantum (phase-aligned)")
for xc, xq in zip(x_classical, x_hat / phase):
    print(f"  {xc.real:+.6f}{xc.imag:+.6f}j  {xq.real:+.6f}{xq.imag:+.6f}j")

# C controls the post-selection rate: C = lambda_min is the best allowed
for c_val in (0.05, 0.1, float(lams.min())):
    _, p = hhl(LinearSystem(A, b), d=4, C=c_val, rng=RandomSource(14))
    print(f"C = {c_val:.4f} -> p_success = {p:.6f}")
