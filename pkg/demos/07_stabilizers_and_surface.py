"""
Stabilizer sectors and surface-code cycles
==========================================

A stabilizer group carves the Hilbert space into syndrome sectors; a
surface-code cycle projects onto one of them and then keeps announcing
the same answer until an error moves the state.
"""

import numpy as np

from qsimlab.core import RandomSource, random_state, zero_state
from qsimlab.qec import (
    ARRAY_STABILIZERS,
    InjectedError,
    PauliString,
    StabilizerGroup,
    classify_operator,
    loop_equivalence,
    partition_by_stabilizers,
    surface_cycle,
    surface_error_table,
)

# {ZZI, IZZ} splits 3 qubits into four 2-dimensional sectors
parts = partition_by_stabilizers(StabilizerGroup(["ZZI", "IZZ"]))
print("sector  dim  basis kets")
for bits, basis in sorted(parts.items()):
    hot = ["|" + format(i, "03b") + ">" for i in range(8)
           if np.abs(basis[i]).max() > 1e-12]
    print(" ", bits, "  ", basis.shape[1], " ", " ".join(hot))

# operators classify as stabilizer / logical / error by commutation
group = StabilizerGroup(["ZZI", "IZZ"])
for word in ("ZIZ", "XXX", "XII", "IXI"):
    c = classify_operator(PauliString(word), group)
    print(f"{word}: {c.kind}", f"syndrome {c.syndrome}" if c.syndrome else "")

# --- surface cycles ---------------------------------------------------
# a 4-qubit check cycle: outcome probabilities come straight from the
# corner amplitudes of the input
amp = random_state(2, RandomSource(31).generator)
a, b, c, d = amp
print("\n4-qubit cycle on a random 2-qubit state:")
for bits in ((0, 0), (1, 0), (0, 1), (1, 1)):
    res = surface_cycle(4, amp, force=bits)
    print(f"  syndrome {bits}: p = {res.probability:.5f}")
print("  |a+d|^2/2 =", round(abs(a + d) ** 2 / 2, 5), "(checks the first row)")

# repeated cycles are idempotent: same syndrome, probability one
res = surface_cycle(9, zero_state(5), force=(0, 1, 1, 0))
again = surface_cycle(9, res.state)
print("\n9-qubit cycle twice: second syndrome", again.syndrome,
      "with p =", round(again.probability, 10))

# readout errors flash for one cycle; data errors change the report
rows = surface_error_table(9, InjectedError("readout", 3, ancilla=2),
                           n_cycles=6, first=(0, 0, 1, 0))
print("\nreadout error at cycle 3: ", rows)
rows = surface_error_table(9, InjectedError("data", 3, pauli="IIZII"),
                           n_cycles=6, first=(0, 0, 1, 0))
print("data Z error at cycle 3:  ", rows)

# two paths bounding a face differ by stabilizers: same logical action
print("\nZ_A Z_B Z_E equivalent to Z_C Z_F Z_G?",
      loop_equivalence("ABE", "CFG", ARRAY_STABILIZERS))
