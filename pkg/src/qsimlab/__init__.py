"""Dense quantum-circuit simulation lab.

Subpackages cover circuit primitives (:mod:`qsimlab.core`), textbook
algorithms (:mod:`qsimlab.algorithms`), Ising encodings with annealing and
variational circuits (:mod:`qsimlab.ising`), coherent/environmental/readout
noise models (:mod:`qsimlab.noise`), error-correcting codes
(:mod:`qsimlab.qec`), and error mitigation (:mod:`qsimlab.mitigation`).
"""

from . import algorithms, core, ising, mitigation, noise, qec
from .core import (
    RandomSource,
    KrausChannel,
    apply_circuit,
    apply_gate,
    apply_kraus,
    basis_state,
    controlled,
    expectation_pauli,
    fidelity,
    ket,
    measure_z,
    qft_circuit,
    standard_gate,
    states_equal,
    tensor_product,
    zero_state,
)

__version__ = "0.1.0"

__all__ = [
    "algorithms",
    "core",
    "ising",
    "mitigation",
    "noise",
    "qec",
    "RandomSource",
    "KrausChannel",
    "apply_circuit",
    "apply_gate",
    "apply_kraus",
    "basis_state",
    "controlled",
    "expectation_pauli",
    "fidelity",
    "ket",
    "measure_z",
    "qft_circuit",
    "standard_gate",
    "states_equal",
    "tensor_product",
    "zero_state",
    "__version__",
]
