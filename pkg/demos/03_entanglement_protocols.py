"""
Teleportation and dense coding
==============================

Two sides of the same Bell-pair coin: teleportation moves one qubit of
state with two classical bits; dense coding moves two classical bits
with one qubit.
"""

import numpy as np

from qsimlab.algorithms import (
    dense_coding,
    teleport,
    teleport_branch_probabilities,
)
from qsimlab.core import RandomSource, fidelity, random_state

psi = random_state(1, RandomSource(5).generator)
print("input state:", np.round(psi, 4))

# all four measurement branches hand back the same state after the
# conditional Pauli fix-up, each with probability 1/4
probs = teleport_branch_probabilities(psi)
print("\nbranch  probability  fidelity(out, in)")
for m1 in (0, 1):
    for m2 in (0, 1):
        out = teleport(psi, force=(m1, m2))
        print(f"  {m1}{m2}      {probs[2 * m1 + m2]:.4f}      "
              f"{fidelity(out, psi):.12f}")

# sampled run: the branch is random, the output never is
out = teleport(psi, rng=RandomSource(6))
print("\nsampled branch fidelity:", fidelity(out, psi))

# --- dense coding ----------------------------------------------------
# encoding applies {I, X, Z, XZ} to one half of a Bell pair;
# the Bell measurement at the far end reads both bits back
print("\nx y -> decoded")
for x in (0, 1):
    for y in (0, 1):
        print(f"{x} {y} ->", dense_coding(x, y))
