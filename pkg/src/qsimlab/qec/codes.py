"""Repetition and concatenated code constructions with explicit circuits.

Each code is a CodeSpec: encode circuit, syndrome-extraction circuit over
data + ancilla qubits, a correction table mapping syndrome bits to a Pauli
recovery, and a decode circuit. The tables are plain data so tests can
enumerate every entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..core import (
    CNOT,
    H,
    apply_circuit,
    as_generator,
    fidelity,
    measure_register,
    tensor_product,
    zero_state,
)
from .pauli import PauliString, Syndrome, apply_pauli


@dataclass(frozen=True)
class CodeSpec:
    """A stabilizer-style code given as explicit circuits plus a lookup table.

    Qubits 0..n_physical-1 are data, the next n_ancilla are syndrome
    ancillas (syndrome circuits address the combined register).
    """

    name: str
    n_physical: int
    n_ancilla: int
    encode: tuple
    syndrome: tuple
    correction: Mapping[tuple, PauliString]
    decode: tuple

    def __post_init__(self):
        for bits, op in self.correction.items():
            if len(bits) != self.n_ancilla:
                raise ValueError(f"syndrome key {bits} length != {self.n_ancilla}")
            if op.n != self.n_physical:
                raise ValueError(f"correction {op} length != {self.n_physical}")


@dataclass(frozen=True)
class RunResult:
    """Outcome of one error-correction round."""

    final: np.ndarray          # recovered 1-qubit state
    syndrome: Syndrome
    corrected: bool            # recovered state matches the input reference
    physical: np.ndarray       # full post-decode data register


def _cnot(control: int, target: int):
    return (CNOT, [control, target])


def bit_flip_code() -> CodeSpec:
    # syndrome: ancilla 3 reads parity(q0,q1), ancilla 4 reads parity(q0,q2)
    table = {
        (0, 0): PauliString("III"),
        (1, 1): PauliString("XII"),
        (1, 0): PauliString("IXI"),
        (0, 1): PauliString("IIX"),
    }
    return CodeSpec(
        name="bit-flip",
        n_physical=3,
        n_ancilla=2,
        encode=(_cnot(0, 1), _cnot(0, 2)),
        syndrome=(_cnot(0, 3), _cnot(1, 3), _cnot(0, 4), _cnot(2, 4)),
        correction=table,
        decode=(_cnot(0, 2), _cnot(0, 1)),
    )


def phase_flip_code() -> CodeSpec:
    # same parity layout conjugated by Hadamards: detects Z instead of X
    table = {
        (0, 0): PauliString("III"),
        (1, 1): PauliString("ZII"),
        (1, 0): PauliString("IZI"),
        (0, 1): PauliString("IIZ"),
    }
    hs = tuple((H, [q]) for q in range(3))
    return CodeSpec(
        name="phase-flip",
        n_physical=3,
        n_ancilla=2,
        encode=(_cnot(0, 1), _cnot(0, 2)) + hs,
        syndrome=hs + (_cnot(0, 3), _cnot(1, 3), _cnot(0, 4), _cnot(2, 4)) + hs,
        correction=table,
        decode=hs + (_cnot(0, 2), _cnot(0, 1)),
    )


def _shor_correction_table() -> dict:
    """All 256 syndrome entries: X part from the three block-parity pairs,
    Z part from the two block-phase detectors."""
    x_map = {(0, 0): None, (1, 1): 0, (1, 0): 1, (0, 1): 2}
    z_map = {(0, 0): None, (1, 1): 0, (1, 0): 3, (0, 1): 6}
    table = {}
    for key in np.ndindex((2,) * 8):
        op = PauliString.identity(9)
        for block, base in enumerate((0, 3, 6)):
            offset = x_map[(key[2 * block], key[2 * block + 1])]
            if offset is not None:
                op = op * PauliString.single(9, base + offset, "X")
        z_target = z_map[(key[6], key[7])]
        if z_target is not None:
            op = op * PauliString.single(9, z_target, "Z")
        table[tuple(int(b) for b in key)] = op
    return table


def shor_code() -> CodeSpec:
    encode = (
        _cnot(0, 3),
        _cnot(0, 6),
        (H, [0]),
        (H, [3]),
        (H, [6]),
        _cnot(0, 1),
        _cnot(0, 2),
        _cnot(3, 4),
        _cnot(3, 5),
        _cnot(6, 7),
        _cnot(6, 8),
    )
    # bit-flip pairs per block: ancillas 9..14
    parity = []
    for block, anc in zip((0, 3, 6), (9, 11, 13)):
        parity += [
            _cnot(block, anc),
            _cnot(block + 1, anc),
            _cnot(block, anc + 1),
            _cnot(block + 2, anc + 1),
        ]
    # phase detectors: X parities of qubits 0-5 (ancilla 15) and 0-2,6-8
    # (ancilla 16), read out through a Hadamard sandwich on the data
    hs = tuple((H, [q]) for q in range(9))
    phase = [_cnot(q, 15) for q in range(6)]
    phase += [_cnot(q, 16) for q in (0, 1, 2, 6, 7, 8)]
    syndrome = tuple(parity) + hs + tuple(phase) + hs
    return CodeSpec(
        name="shor",
        n_physical=9,
        n_ancilla=8,
        encode=encode,
        syndrome=syndrome,
        correction=_shor_correction_table(),
        decode=tuple(reversed(encode)),
    )


def encode_state(code: CodeSpec, psi: np.ndarray) -> np.ndarray:
    """Embed a 1-qubit state on data qubit 0 and run the encode circuit."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise ValueError("encode_state expects a single-qubit state")
    full = tensor_product(psi, zero_state(code.n_physical - 1))
    return apply_circuit(full, code.encode)


def run_code(code: CodeSpec, psi: np.ndarray, error: PauliString, rng) -> RunResult:
    """One full round: encode, corrupt, extract syndrome, correct, decode.

    The returned flag compares the recovered qubit against the supplied
    input (this is a diagnostic harness, so the reference is available);
    uncorrectable errors come back corrected=False with the wrong state.
    """
    if error.n != code.n_physical:
        raise ValueError(f"error length {error.n} != {code.n_physical}")
    state = encode_state(code, psi)
    state = apply_pauli(state, error)
    state = tensor_product(state, zero_state(code.n_ancilla))
    state = apply_circuit(state, code.syndrome)
    ancillas = list(range(code.n_physical, code.n_physical + code.n_ancilla))
    bits, state = measure_register(state, ancillas, rng)
    # ancillas are now a definite computational column; drop them
    column = int("".join(str(b) for b in bits), 2)
    data = state.reshape(1 << code.n_physical, 1 << code.n_ancilla)[:, column]
    data = data / np.linalg.norm(data)
    data = apply_pauli(data, code.correction[bits])
    data = apply_circuit(data, code.decode)
    blocks = data.reshape(2, -1)
    residual = 1.0 - float(np.sum(np.abs(blocks[:, 0]) ** 2))
    final = blocks[:, 0].copy()
    norm = np.linalg.norm(final)
    if norm > 1e-12:
        final = final / norm
    corrected = residual < 1e-10 and fidelity(final, psi) >= 1.0 - 1e-10
    return RunResult(
        final=final,
        syndrome=Syndrome(bits),
        corrected=bool(corrected),
        physical=data,
    )


def classical_majority(p_flip: float, trials: int, rng) -> float:
    """Monte-Carlo failure fraction of 3-copy majority voting.

    Each trial flips three independent bits with probability p_flip; the
    vote fails when at least two flipped. Converges to 3p^2 - 2p^3.
    """
    if not 0.0 <= p_flip <= 1.0:
        raise ValueError(f"p_flip must be in [0,1]: {p_flip}")
    if trials < 1:
        raise ValueError("trials must be positive")
    gen = as_generator(rng)
    flips = gen.random((trials, 3)) < p_flip
    return float(np.mean(flips.sum(axis=1) >= 2))
