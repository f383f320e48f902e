"""
Dephasing and how pi pulses cancel it
=====================================

A qubit coupled to bath oscillators loses coherence as e^{-Gamma(t)}.
Flipping the qubit every dt makes consecutive time slices interfere
destructively; halving dt keeps cutting Gamma toward zero.
"""

import numpy as np

from qsimlab.mitigation import (
    BathSpec,
    PulseSequence,
    coherence_trace,
    gamma_free,
    gamma_pulsed,
)

bath = BathSpec(((0.08, 1.0), (0.10, 1.7), (0.12, 2.3)), beta=2.0)

# free decoherence grows with time and with temperature
print("Gamma_free(0, t):")
for t in (0.5, 1.0, 2.0):
    print(f"  t = {t}: {gamma_free(bath, 0.0, t):.6f}")

hot = BathSpec(bath.modes, beta=0.5)
print("same bath, hotter (beta 2 -> 0.5):",
      round(gamma_free(hot, 0.0, 2.0), 6), "vs",
      round(gamma_free(bath, 0.0, 2.0), 6))

# --- pulse sweep -------------------------------------------------------
# fixed total time 2.0, pi pulses every dt; halving dt suppresses Gamma
total = 2.0
free = gamma_free(bath, 0.0, total)
print(f"\nGamma_free over total time {total}: {free:.6f}")
print(" cycles  dt       Gamma_pulsed   ratio to free")
for n in (1, 2, 4, 8, 16, 32):
    dt = total / (2 * n)
    g = gamma_pulsed(bath, PulseSequence(0.0, dt, n))
    print(f"  {n:4d}  {dt:.5f}   {g:.3e}     {g / free:.3e}")
print("(one badly timed echo can even hurt; dense pulses always win)")

# --- coherence traces ---------------------------------------------------
times = np.linspace(0.0, 2.0, 9)
free_trace = coherence_trace(bath, times)
pulsed_trace = coherence_trace(bath, times, PulseSequence(0.0, 0.125, 8))
print("\n t     free      pulsed (dt = 0.125)")
for t, f, p in zip(times, free_trace, pulsed_trace):
    print(f"{t:4.2f}  {f:.6f}  {p:.6f}")
