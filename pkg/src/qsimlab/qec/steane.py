"""Steane [[7,1,3]] code: logical states, transversal gates, CNOT error
propagation, and the measurement-based T-gate gadget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..core import (
    CNOT,
    H,
    S,
    X,
    Z,
    apply_circuit,
    controlled,
    expectation_pauli,
    measure_z,
    tensor_product,
)
from .pauli import PauliString

STEANE_GENERATORS = (
    PauliString("IIIXXXX"),
    PauliString("IXXIIXX"),
    PauliString("XIXIXIX"),
    PauliString("IIIZZZZ"),
    PauliString("IZZIIZZ"),
    PauliString("ZIZIZIZ"),
)

_ZERO_WORDS = (
    "0000000", "1010101", "0110011", "1100110",
    "0001111", "1011010", "0111100", "1101001",
)

_S_DAG = S.conj().T
CZ = controlled(Z)


def _codeword_sum(words) -> np.ndarray:
    state = np.zeros(1 << 7, dtype=complex)
    for w in words:
        state[int(w, 2)] = 1.0
    return state / np.sqrt(len(words))


def steane_zero() -> np.ndarray:
    """Logical |0>: equal superposition of the eight even codewords."""
    return _codeword_sum(_ZERO_WORDS)


def steane_one() -> np.ndarray:
    """Logical |1> = X^(x7) |0_L>: the bit-complemented codewords."""
    flipped = ["".join("1" if c == "0" else "0" for c in w) for w in _ZERO_WORDS]
    return _codeword_sum(flipped)


def _require_code_space(state: np.ndarray, blocks: int):
    for g in STEANE_GENERATORS:
        for b in range(blocks):
            word = "I" * (7 * b) + g.word + "I" * (7 * (blocks - 1 - b))
            val = expectation_pauli(state, PauliString(word))
            if abs(val - 1.0) > 1e-9:
                raise ValueError(
                    f"state outside the code space: <{word}> = {val:.6f}"
                )


def steane_logical(gate: str, state: np.ndarray) -> np.ndarray:
    """Apply a logical gate transversally.

    X, Z, H act qubit-by-qubit; the logical phase gate is S-dagger on
    every qubit ('S_naive' keeps plain S per qubit, which lands on the
    wrong logical phase and is kept for regression tests). CNOT expects
    a 14-qubit two-block state and pairs qubit i with i+7.
    """
    psi = np.asarray(state, dtype=complex)
    if gate == "CNOT":
        if psi.shape != (1 << 14,):
            raise ValueError("logical CNOT needs a 14-qubit two-block state")
        _require_code_space(psi, blocks=2)
        return apply_circuit(psi, [(CNOT, [i, i + 7]) for i in range(7)])
    if psi.shape != (1 << 7,):
        raise ValueError("single-block logical gates need a 7-qubit state")
    _require_code_space(psi, blocks=1)
    per_qubit = {"X": X, "Z": Z, "H": H, "S": _S_DAG, "S_naive": S}
    if gate not in per_qubit:
        raise ValueError(f"unsupported logical gate {gate!r}")
    return apply_circuit(psi, [(per_qubit[gate], [q]) for q in range(7)])


def cnot_error_propagation(error: PauliString, position: str = "before") -> PauliString:
    """Push a two-qubit Pauli error through a CNOT (qubit 0 = control).

    position 'before': the error happened upstream, return its image on
    the far side; 'after': pull a downstream error back. CNOT is self-
    inverse so both directions are the same conjugation.
    """
    if error.n != 2:
        raise ValueError("error must act on the CNOT's two qubits")
    if position not in ("before", "after"):
        raise ValueError(f"position must be 'before' or 'after': {position!r}")
    if position == "before":
        m = CNOT @ error.matrix() @ CNOT.conj().T
    else:
        m = CNOT.conj().T @ error.matrix() @ CNOT
    for word in ("".join(p) for p in itertools.product("IXYZ", repeat=2)):
        base = PauliString(word)
        coeff = np.trace(base.matrix().conj().T @ m) / 4.0
        if abs(coeff) > 0.5:
            return PauliString(word, phase=complex(coeff))
    raise ValueError(f"conjugated operator is not a Pauli string: {error}")


@dataclass(frozen=True)
class FtTResult:
    state: np.ndarray  # output register, equals T|psi> up to global phase
    y: int             # measurement branch; 1 means the S.X fix-up ran


_T_ANCILLA = np.array([1.0, np.exp(1j * np.pi / 4)], dtype=complex) / np.sqrt(2)
# SX is not Hermitian (eigenvalues +-e^{i pi/4}); strip the phase so the
# +-1 projectors (1 +- A)/2 make sense. A = T X T^dag.
_SX_HERMITIAN = np.exp(-1j * np.pi / 4) * (S @ X)


def prepare_t_ancilla(rng, max_attempts: int = 100) -> np.ndarray:
    """Measurement-based preparation of (|0> + e^{i pi/4}|1>)/sqrt(2).

    Measures the phase-fixed SX observable on a fresh random state and
    post-selects the +1 outcome; the +1 eigenspace is one-dimensional, so
    acceptance collapses exactly onto the ancilla.
    """
    from ..core import as_generator, random_state

    gen = as_generator(rng)
    plus = 0.5 * (np.eye(2) + _SX_HERMITIAN)
    for _ in range(max_attempts):
        psi = random_state(1, gen)
        branch = plus @ psi
        p_plus = float(np.real(np.vdot(branch, branch)))
        if gen.random() < p_plus:
            return branch / np.sqrt(p_plus)
    raise RuntimeError(f"post-selection failed {max_attempts} times")


def ft_t_gate(psi: np.ndarray, rng=None, *, force_y=None, ancilla=None) -> FtTResult:
    """T-gate by ancilla consumption instead of a direct non-Clifford gate.

    The data qubit interacts with the T-ancilla through H-CZ-H (a CNOT
    controlled by the ancilla) and is then measured out; the ancilla wire
    carries T|psi>, after an S.X correction when the outcome is 1. The
    y=1 branch output carries a harmless global phase e^{i pi/4}.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise ValueError("ft_t_gate acts on a single qubit")
    if ancilla is None:
        ancilla = _T_ANCILLA
    joint = tensor_product(psi, np.asarray(ancilla, dtype=complex))
    joint = apply_circuit(joint, [(H, [0]), (CZ, [0, 1]), (H, [0])])
    y, collapsed = measure_z(joint, 0, rng, force=force_y)
    out = collapsed.reshape(2, 2)[y, :].copy()
    out = out / np.linalg.norm(out)
    if y == 1:
        out = S @ (X @ out)
    return FtTResult(state=out, y=int(y))
