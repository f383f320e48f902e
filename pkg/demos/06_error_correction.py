"""
Repetition codes, the Shor code, and failure rates
==================================================

Syndromes identify errors without looking at the data; majority logic
then wins whenever fewer than half the qubits flipped. Concatenation
squares the improvement below threshold.
"""

import numpy as np

from qsimlab.core import RandomSource, fidelity, random_state
from qsimlab.qec import (
    PauliString,
    bit_flip_code,
    correlated_pfail,
    pfail_concatenated,
    pfail_repetition,
    run_code,
    sample_repetition_failure,
    shor_code,
)

gen = RandomSource(77).generator
psi = random_state(1, gen)

# every single bit flip is identified and undone
code = bit_flip_code()
print("bit-flip code, single X errors:")
for qubit in range(3):
    res = run_code(code, psi, PauliString.single(3, qubit, "X"), gen)
    print(f"  X on qubit {qubit}: syndrome {res.syndrome}, "
          f"fidelity {fidelity(res.final, psi):.12f}")

# two flips fool the majority vote
res = run_code(code, psi, PauliString("XXI"), gen)
print("double flip XXI corrected?", res.corrected)

# the Shor code handles any single-qubit Pauli, all 27 of them
code = shor_code()
worst = 1.0
for qubit in range(9):
    for letter in "XYZ":
        res = run_code(code, psi, PauliString.single(9, qubit, letter), gen)
        worst = min(worst, fidelity(res.final, psi))
print("\nShor code, 27 single-qubit errors: worst fidelity", worst)

# --- failure curves ---------------------------------------------------
print("\nP_fail for k-qubit repetition at eps = 0.1:")
for k in (1, 3, 5, 9):
    print(f"  k={k}: analytic {pfail_repetition(k, 0.1):.6f}, sampled",
          round(sample_repetition_failure(k, 0.1, 50_000, gen), 6))

print("\nconcatenating the 3-qubit code at eps = 0.05:")
for level in range(4):
    r = pfail_concatenated(level, 0.05)
    print(f"  level {level}: exact {r.exact:.3e}  approx {r.approximant:.3e}")

# correlated bursts spoil the story: leading order counts error PAIRS
for n in (3, 5, 7):
    r = correlated_pfail(n, 0.01, max_order=2)
    print(f"correlated n={n}: {r.count} ways at order {r.order}, "
          f"leading {r.leading:.2e}")
