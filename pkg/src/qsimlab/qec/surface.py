"""Minimal surface-code cycles on two small layouts, plus the abstract
loop-equivalence check for error/correction path pairs.

Layouts:
  4-qubit: data (a,b) = qubits 0,1; X-ancilla = 2, Z-ancilla = 3.
    Checks X_a X_b and Z_a Z_b.
  9-qubit: data sites (a,c,e,g,i) = qubits 0..4; ancillas b,d,f,h = 5..8.
    Checks S_b = Z_a Z_c Z_e, S_d = X_a X_e X_g, S_f = X_c X_e X_i,
    S_h = Z_e Z_g Z_i, extracted in the order (M_b, M_d, M_f, M_h).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import CNOT, H, apply_circuit, as_generator, tensor_product, zero_state
from .pauli import PauliString, Syndrome, apply_pauli
from .stabilizer import StabilizerGroup, classify_operator

_DETERMINISTIC_TOL = 1e-9


@dataclass(frozen=True)
class _Layout:
    name: str
    n_data: int
    n_ancilla: int
    circuit: tuple
    labels: tuple  # syndrome entry names, extraction order


def _cnot(c, t):
    return (CNOT, [c, t])


_LAYOUT_4 = _Layout(
    name="4-qubit",
    n_data=2,
    n_ancilla=2,
    circuit=(
        (H, [2]),
        _cnot(2, 0),
        _cnot(2, 1),
        _cnot(0, 3),
        _cnot(1, 3),
        (H, [2]),
    ),
    labels=("M_X", "M_Z"),
)

_LAYOUT_9 = _Layout(
    name="9-qubit",
    n_data=5,
    n_ancilla=4,
    circuit=(
        (H, [6]),
        (H, [7]),
        _cnot(0, 5),
        _cnot(1, 5),
        _cnot(2, 5),
        _cnot(6, 0),
        _cnot(6, 2),
        _cnot(6, 3),
        _cnot(7, 1),
        _cnot(7, 2),
        _cnot(7, 4),
        _cnot(2, 8),
        _cnot(3, 8),
        _cnot(4, 8),
        (H, [6]),
        (H, [7]),
    ),
    labels=("M_b", "M_d", "M_f", "M_h"),
)


def _layout(layout) -> _Layout:
    text = str(layout)
    if "4" in text:
        return _LAYOUT_4
    if "9" in text:
        return _LAYOUT_9
    raise ValueError(f"unknown layout {layout!r}; use 4 or 9")


@dataclass(frozen=True)
class CycleResult:
    state: np.ndarray      # post-measurement data register
    syndrome: Syndrome
    probability: float     # Born probability of the observed pattern


def surface_cycle(layout, data_state, rng=None, *, force=None) -> CycleResult:
    """Run one full syndrome-extraction cycle.

    The ancillas are appended fresh, the layout circuit runs, and the
    ancilla register is read out. `force` pins the outcome bits (raises
    on a zero-probability pattern). With neither rng nor force the cycle
    only proceeds when the outcome is already deterministic, which is the
    steady state after the first projection.
    """
    lay = _layout(layout)
    psi = np.asarray(data_state, dtype=complex)
    if psi.shape != (1 << lay.n_data,):
        raise ValueError(
            f"{lay.name} layout expects a {1 << lay.n_data}-amplitude data state"
        )
    full = tensor_product(psi, zero_state(lay.n_ancilla))
    full = apply_circuit(full, lay.circuit)
    table = full.reshape(1 << lay.n_data, 1 << lay.n_ancilla)
    probs = np.sum(np.abs(table) ** 2, axis=0)
    if force is not None:
        bits = tuple(int(b) for b in force)
        if len(bits) != lay.n_ancilla or any(b not in (0, 1) for b in bits):
            raise ValueError(f"force must supply {lay.n_ancilla} bits")
        col = int("".join(map(str, bits)), 2)
        if probs[col] < 1e-12:
            raise ValueError(f"forced outcome {bits} has zero probability")
    elif rng is not None:
        gen = as_generator(rng)
        col = int(gen.choice(probs.size, p=probs / probs.sum()))
    else:
        col = int(np.argmax(probs))
        if probs[col] < 1.0 - _DETERMINISTIC_TOL:
            raise ValueError("outcome is not deterministic; pass rng or force")
    data = table[:, col] / np.sqrt(probs[col])
    bits = tuple((col >> (lay.n_ancilla - 1 - k)) & 1 for k in range(lay.n_ancilla))
    return CycleResult(state=data, syndrome=Syndrome(bits), probability=float(probs[col]))


@dataclass(frozen=True)
class InjectedError:
    """A single fault for surface_error_table.

    kind 'readout': the reported bit at syndrome position `ancilla` is
    flipped for that one cycle (the state collapses by the true outcome).
    kind 'data': `pauli` hits the data register just before the cycle's
    extraction circuit.
    """

    kind: str
    cycle: int
    ancilla: Optional[int] = None
    pauli: Optional[PauliString] = None

    def __post_init__(self):
        if self.kind not in ("readout", "data"):
            raise ValueError(f"kind must be 'readout' or 'data': {self.kind!r}")
        if self.cycle < 1:
            raise ValueError("cycles are numbered from 1")
        if self.kind == "readout" and self.ancilla is None:
            raise ValueError("readout error needs a syndrome position")
        if self.kind == "data":
            if self.pauli is None:
                raise ValueError("data error needs a Pauli")
            if isinstance(self.pauli, str):
                object.__setattr__(self, "pauli", PauliString.from_text(self.pauli))


def surface_error_table(layout, injected=(), n_cycles=8, rng=None, first=None):
    """Repeated cycles from the all-zero data state with optional faults.

    Returns the reported syndrome rows (cycle 1 first). `first` forces
    the first cycle's outcome so tables are reproducible without an rng;
    later noise-free cycles are deterministic.
    """
    lay = _layout(layout)
    if isinstance(injected, InjectedError):
        injected = (injected,)
    injected = tuple(injected)
    if n_cycles < 1:
        raise ValueError("n_cycles must be positive")
    for err in injected:
        if err.cycle > n_cycles:
            raise ValueError(f"error at cycle {err.cycle} but only {n_cycles} cycles")
        if err.kind == "readout" and not 0 <= err.ancilla < lay.n_ancilla:
            raise ValueError(f"syndrome position out of range: {err.ancilla}")
        if err.kind == "data" and err.pauli.n != lay.n_data:
            raise ValueError(f"data error must act on {lay.n_data} qubits")
    state = zero_state(lay.n_data)
    rows = []
    for cycle in range(1, n_cycles + 1):
        for err in injected:
            if err.kind == "data" and err.cycle == cycle:
                state = apply_pauli(state, err.pauli)
        res = surface_cycle(
            layout, state, rng=rng, force=first if cycle == 1 else None
        )
        state = res.state
        reported = list(res.syndrome.bits)
        for err in injected:
            if err.kind == "readout" and err.cycle == cycle:
                reported[err.ancilla] ^= 1
        rows.append(Syndrome(tuple(reported)))
    return rows


# --- loop equivalence on abstract site alphabets ---------------------------

SURFACE5_SITES = ("a", "c", "e", "g", "i")
SURFACE5_STABILIZERS = (
    PauliString("ZZZII"),  # S_b = Z_a Z_c Z_e
    PauliString("XIXXI"),  # S_d = X_a X_e X_g
    PauliString("IXXIX"),  # S_f = X_c X_e X_i
    PauliString("IIZZZ"),  # S_h = Z_e Z_g Z_i
)

ARRAY_SITES = ("A", "B", "C", "D", "E", "F", "G")
ARRAY_STABILIZERS = (
    PauliString("IZIZZIZ"),  # S_e = Z_B Z_D Z_E Z_G
    PauliString("ZIZZIZI"),  # S_d = Z_A Z_C Z_D Z_F
)


def pauli_on_sites(letter: str, sites, all_sites) -> PauliString:
    """Single-letter Pauli supported on named sites, e.g. Z on {A,B,E}."""
    if letter not in "XYZ":
        raise ValueError(f"letter must be X, Y, or Z: {letter!r}")
    positions = []
    for s in sites:
        if s not in all_sites:
            raise ValueError(f"unknown site {s!r}; layout has {all_sites}")
        positions.append(all_sites.index(s))
    word = "".join(
        letter if q in positions else "I" for q in range(len(all_sites))
    )
    return PauliString(word)


def loop_equivalence(path_a, path_b, stabilizers, *, sites=ARRAY_SITES,
                     letter: str = "Z") -> bool:
    """Whether an error chain and a correction chain cancel harmlessly.

    True iff the product of the two site paths lies in the stabilizer
    group (the chains close a contractible loop); False when the product
    is a logical operator, i.e. the correction silently rewrote the
    encoded state.
    """
    group = StabilizerGroup(stabilizers, n_qubits=len(sites))
    product = pauli_on_sites(letter, path_a, sites) * pauli_on_sites(
        letter, path_b, sites
    )
    return classify_operator(product, group).kind == "stabilizer"
