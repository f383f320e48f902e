"""
Logical gates on the Steane code and a measurement-driven T gate
================================================================

Transversal gates act qubit-by-qubit, so errors cannot spread inside a
block. The S gate needs a twist (conjugate + logical Z) and T needs a
prepared ancilla plus measurement.
"""

import numpy as np

from qsimlab.core import RandomSource, T, fidelity, random_state, tensor_product
from qsimlab.qec import (
    PauliString,
    apply_pauli,
    cnot_error_propagation,
    ft_t_gate,
    prepare_t_ancilla,
    steane_logical,
    steane_one,
    steane_zero,
)

zero, one = steane_zero(), steane_one()

# the naive transversal S^(x7) gets the phase wrong; the corrected
# construction lands on +i as the logical S must
got = steane_logical("S", one)
naive = steane_logical("S_naive", one)
print("S_L |1_L>      = ", np.vdot(one, got).round(6), "* |1_L>")
print("naive S^x7 |1_L> =", np.vdot(one, naive).round(6), "* |1_L>")

# transversal CNOT is the logical CNOT
basis = (zero, one)
print("\nlogical CNOT truth table:")
for a in (0, 1):
    for b in (0, 1):
        out = steane_logical("CNOT", tensor_product(basis[a], basis[b]))
        want = tensor_product(basis[a], basis[a ^ b])
        print(f"  |{a}{b}> -> |{a}{a ^ b}>  fidelity {fidelity(out, want):.12f}")

# single-qubit conjugation rules: X on the control copies to the target
print("\nCNOT error propagation:")
for word in ("XI", "IZ", "ZI", "IX"):
    print(f"  {word} before the gate -> "
          f"{cnot_error_propagation(PauliString(word), 'before')}")

# --- fault-tolerant T -------------------------------------------------
# ancilla |0> + e^{i pi/4}|1> is made by post-selecting an SX measurement
phi = prepare_t_ancilla(RandomSource(2).generator)
target = np.array([1.0, np.exp(1j * np.pi / 4)]) / np.sqrt(2)
print("\nancilla fidelity:", fidelity(phi, target))

# both measurement branches implement T, one directly, one via fix-up
psi = random_state(1, RandomSource(3).generator)
for y in (0, 1):
    res = ft_t_gate(psi, force_y=y)
    print(f"branch y={y}: fidelity vs T|psi> =",
          round(fidelity(res.state, T @ psi), 12))
