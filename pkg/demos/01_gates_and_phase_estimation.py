"""
Single-qubit algebra, the QFT, and phase estimation
===================================================

Walks from raw gate matrices to reading a 6-bit phase off a unitary,
first with the ancilla-register method and then bit by bit.
"""

import numpy as np

from qsimlab.core import H, T, controlled, ket, qft_circuit, rn
from qsimlab.algorithms import qpe_kitaev, qpe_register_distribution

# Hadamard is a pi rotation about the (x+z)/sqrt(2) axis, up to phase
axis = (1 / np.sqrt(2), 0.0, 1 / np.sqrt(2))
print("max |i R_n(pi) - H| =", np.max(np.abs(1j * rn(np.pi, axis) - H)))

# controlled-U just embeds U in the lower-right block
print("\ncontrolled-T:")
print(np.round(controlled(T), 3))

# the 3-qubit QFT as a gate list; its unitary columns are Fourier modes
print("\nQFT circuit on 3 qubits uses", len(qft_circuit(3)), "gates")

# --- register QPE ----------------------------------------------------
# phase 5/8 is exactly representable in 3 bits, so the register
# concentrates all probability on |101>
phi = 5 / 8
U = np.diag([1.0, np.exp(2j * np.pi * phi)])
probs = qpe_register_distribution(U, ket("1"), 3)
print("\n3-bit register distribution for phi = 5/8:")
for k, p in enumerate(probs):
    bar = "#" * int(round(40 * p))
    print(f"  |{k:03b}>  {p:8.5f}  {bar}")

# an inexact phase spreads out but still peaks at the nearest grid point
probs = qpe_register_distribution(np.diag([1.0, np.exp(2j * np.pi * 0.61)]),
                                  ket("1"), 3)
print("\nsame register for phi = 0.61 (not on the grid):")
print("  peak at k =", int(np.argmax(probs)), "with p =", round(max(probs), 4))

# --- Kitaev bit-by-bit QPE -------------------------------------------
# each bit comes from a Hadamard test on U^(2^j) with the known tail
# subtracted, so 6 exact bits recover 41/64 = 0.640625 on the nose
phi = 0.640625
U = np.diag([1.0, np.exp(2j * np.pi * phi)])
est = qpe_kitaev(U, ket("1"), 6)
print("\nKitaev estimate:", est.phi_hat, "bits:", est.bits)
print("exact?", est.phi_hat == phi)
