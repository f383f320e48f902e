"""Signed Pauli strings and the syndrome bit convention.

Sign convention, fixed here once for the whole package: a syndrome *bit* of
0 means the measured stabilizer eigenvalue was +1, a bit of 1 means -1.
`Syndrome.signs` converts to the +/-1 presentation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import apply_gate, pauli_matrix, PAULIS

_PHASES = (1 + 0j, -1 + 0j, 1j, -1j)
_PHASE_TEXT = {1 + 0j: "", -1 + 0j: "-", 1j: "i", -1j: "-i"}

# single-letter products: (left, right) -> (phase, letter)
_MUL = {}
for _a in "IXYZ":
    _MUL[("I", _a)] = (1, _a)
    _MUL[(_a, "I")] = (1, _a)
    _MUL[(_a, _a)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _MUL[(_a, _b)] = (1j, _c)
    _MUL[(_b, _a)] = (-1j, _c)


def _normalize_phase(phase) -> complex:
    z = complex(phase)
    for p in _PHASES:
        if abs(z - p) < 1e-12:
            return p
    raise ValueError(f"phase must be one of +1, -1, +i, -i; got {phase!r}")


@dataclass(frozen=True)
class PauliString:
    """A phase in {+1,-1,+i,-i} times a tensor product of I/X/Y/Z letters."""

    word: str
    phase: complex = 1 + 0j

    def __post_init__(self):
        if not self.word or any(c not in "IXYZ" for c in self.word):
            raise ValueError(f"Pauli word must be over IXYZ: {self.word!r}")
        object.__setattr__(self, "phase", _normalize_phase(self.phase))

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls("I" * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        """Letter on one qubit, identity elsewhere."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for {n}")
        word = "I" * qubit + letter + "I" * (n - qubit - 1)
        return cls(word)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse '-iXYZ', '+ZZI', 'XX' style notation."""
        s = text.strip().replace(" ", "")
        phase = 1 + 0j
        # the imaginary unit is lowercase 'i'; uppercase 'I' is identity
        for prefix, p in (("-i", -1j), ("+i", 1j), ("i", 1j), ("-", -1 + 0j), ("+", 1 + 0j)):
            if s.startswith(prefix):
                phase, s = p, s[len(prefix):]
                break
        return cls(s.upper(), phase)

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def weight(self) -> int:
        return sum(1 for c in self.word if c != "I")

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        phase = self.phase * other.phase
        letters = []
        for a, b in zip(self.word, other.word):
            p, c = _MUL[(a, b)]
            phase *= p
            letters.append(c)
        return PauliString("".join(letters), phase)

    def __neg__(self) -> "PauliString":
        return PauliString(self.word, -self.phase)

    def dagger(self) -> "PauliString":
        return PauliString(self.word, self.phase.conjugate())

    def commutes(self, other: "PauliString") -> bool:
        return pauli_commutes(self, other)

    def matrix(self) -> np.ndarray:
        return self.phase * pauli_matrix(self.word)

    def is_identity_word(self) -> bool:
        return self.weight == 0

    def __str__(self) -> str:
        return _PHASE_TEXT[self.phase] + self.word


def pauli_commutes(a, b) -> bool:
    """True iff the strings commute.

    Two Pauli words commute exactly when the number of positions carrying
    distinct non-identity letters is even; phases never matter.
    """
    wa = a.word if isinstance(a, PauliString) else str(a)
    wb = b.word if isinstance(b, PauliString) else str(b)
    if len(wa) != len(wb):
        raise ValueError(f"length mismatch: {len(wa)} vs {len(wb)}")
    differing = sum(
        1 for x, y in zip(wa, wb) if x != "I" and y != "I" and x != y
    )
    return differing % 2 == 0


def apply_pauli(state: np.ndarray, p: PauliString) -> np.ndarray:
    """Apply a signed Pauli string to a state vector (qubit 0 = leftmost letter)."""
    out = np.asarray(state, dtype=complex)
    for i, c in enumerate(p.word):
        if c != "I":
            out = apply_gate(out, PAULIS[c], [i])
    return p.phase * out


class Syndrome:
    """Tuple of stabilizer measurement outcomes; bit 0 <-> eigenvalue +1."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"syndrome bits must be 0/1: {bits}")
        object.__setattr__(self, "bits", bits)

    @property
    def signs(self) -> tuple:
        return tuple(1 - 2 * b for b in self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __eq__(self, other):
        if isinstance(other, Syndrome):
            return self.bits == other.bits
        if isinstance(other, (tuple, list)):
            return self.bits == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        return f"Syndrome{self.bits}"
