"""Stabilizer groups: eigenspace partitions, operator classification, and
the exact-recoverability test for error sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from ..core import KrausChannel
from .pauli import PauliString, Syndrome, pauli_commutes

_PARTITION_MAX_QUBITS = 12


def _symplectic_rows(generators) -> np.ndarray:
    """GF(2) encoding: x-bit set for X/Y letters, z-bit for Z/Y."""
    n = generators[0].n
    rows = np.zeros((len(generators), 2 * n), dtype=np.uint8)
    for r, g in enumerate(generators):
        for q, letter in enumerate(g.word):
            if letter in "XY":
                rows[r, q] = 1
            if letter in "ZY":
                rows[r, n + q] = 1
    return rows


def _gf2_rank(rows: np.ndarray) -> int:
    m = rows.copy()
    rank = 0
    for col in range(m.shape[1]):
        pivot = None
        for r in range(rank, m.shape[0]):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


class StabilizerGroup:
    """Commuting, independent Pauli generators with real phases.

    Real phases plus GF(2) independence guarantee -1 is not in the
    generated group (every generator squares to +1 and no nonempty
    product collapses to the identity word).
    """

    def __init__(self, generators, n_qubits=None):
        gens = tuple(
            g if isinstance(g, PauliString) else PauliString.from_text(g)
            for g in generators
        )
        if gens:
            n = gens[0].n
            if n_qubits is not None and n_qubits != n:
                raise ValueError("n_qubits disagrees with the generators")
            for g in gens:
                if g.n != n:
                    raise ValueError("generators must share one register size")
                if abs(g.phase.imag) > 1e-12:
                    raise ValueError(f"generator phase must be +-1: {g}")
            for a, b in combinations(gens, 2):
                if not pauli_commutes(a, b):
                    raise ValueError(f"generators do not commute: {a}, {b}")
            if _gf2_rank(_symplectic_rows(gens)) != len(gens):
                raise ValueError("dependent generators")
        elif n_qubits is None:
            raise ValueError("an empty group needs an explicit n_qubits")
        self.generators = gens
        self._n = gens[0].n if gens else int(n_qubits)

    @property
    def n(self) -> int:
        return self._n

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def elements(self):
        """All 2^k products of the generators, phases included."""
        out = [PauliString.identity(self.n)]
        for g in self.generators:
            out = out + [g * e for e in out]
        return out

    def contains(self, op: PauliString) -> bool:
        return any(e.word == op.word and abs(e.phase - op.phase) < 1e-12
                   for e in self.elements())

    def __repr__(self):
        inner = ", ".join(str(g) for g in self.generators)
        return f"StabilizerGroup([{inner}])"


def _pauli_basis_action(op: PauliString):
    """Pauli strings act on basis kets as signed permutations.

    Returns (perm, coeff) with op|b> = coeff[b] |perm[b]>.
    """
    n = op.n
    dim = 1 << n
    xmask = 0
    signmask = 0  # qubits contributing (-1)^bit: Z and Y letters
    n_y = 0
    for q, letter in enumerate(op.word):
        bit = 1 << (n - 1 - q)
        if letter in "XY":
            xmask |= bit
        if letter in "ZY":
            signmask |= bit
        if letter == "Y":
            n_y += 1
    idx = np.arange(dim)
    perm = idx ^ xmask
    parity = np.array([bin(b & signmask).count("1") & 1 for b in idx])
    coeff = op.phase * (1j**n_y) * np.where(parity, -1.0, 1.0)
    return perm, coeff


def _apply_to_columns(op: PauliString, block: np.ndarray) -> np.ndarray:
    perm, coeff = _pauli_basis_action(op)
    out = np.empty_like(block)
    out[perm] = coeff[:, None] * block
    return out


def partition_by_stabilizers(group: StabilizerGroup) -> dict:
    """Split the full Hilbert space into joint eigenspaces.

    Keys are syndrome bit tuples (0 = eigenvalue +1) ordered like the
    generators; values are orthonormal basis columns. k independent
    generators on n qubits give 2^k sectors of dimension 2^(n-k); the
    all-zero key is the code space.
    """
    n = group.n
    if n > _PARTITION_MAX_QUBITS:
        raise ValueError(f"partition limited to {_PARTITION_MAX_QUBITS} qubits")
    sectors = {(): np.eye(1 << n, dtype=complex)}
    for g in group.generators:
        split = {}
        for bits, basis in sectors.items():
            moved = _apply_to_columns(g, basis)
            for eig_bit, candidate in ((0, basis + moved), (1, basis - moved)):
                u, s, _ = np.linalg.svd(candidate / 2.0, full_matrices=False)
                kept = u[:, s > 0.5]
                if kept.shape[1]:
                    split[bits + (eig_bit,)] = kept
        sectors = split
    return sectors


@dataclass(frozen=True)
class Classification:
    kind: str  # 'stabilizer' | 'error' | 'normalizer-logical'
    syndrome: Optional[Syndrome] = None

    def __str__(self):
        if self.kind == "error":
            return f"error{tuple(self.syndrome)}"
        return self.kind


def classify_operator(op: PauliString, group: StabilizerGroup) -> Classification:
    """Sort a Pauli operator relative to a stabilizer group.

    Anticommuting with any generator makes it a detectable error and the
    commutation pattern is its syndrome; commuting members of the group
    are stabilizers; commuting non-members act inside the code space and
    are logical operators.
    """
    if op.n != group.n:
        raise ValueError(f"operator length {op.n} != generators {group.n}")
    bits = tuple(0 if pauli_commutes(op, g) else 1 for g in group.generators)
    if any(bits):
        return Classification(kind="error", syndrome=Syndrome(bits))
    if group.contains(op):
        return Classification(kind="stabilizer")
    return Classification(kind="normalizer-logical")


def check_recoverability(errors, projector: np.ndarray, atol: float = 1e-9):
    """Exact correctability test for an error set on a code space.

    Accepts a KrausChannel or a bare list of operators (single-error sets
    are rarely trace-complete). Recoverable iff every P E_i^† E_j P is a
    multiple of P; returns (flag, mu) with mu_ij the proportionality
    coefficients, Hermitian whenever the flag is true.
    """
    if isinstance(errors, KrausChannel):
        ops = list(errors.ops)
    else:
        ops = [np.asarray(e, dtype=complex) for e in errors]
    if not ops:
        raise ValueError("empty error set")
    p = np.asarray(projector, dtype=complex)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError("projector must be a square matrix")
    if not np.allclose(p @ p, p, atol=1e-10) or not np.allclose(p, p.conj().T, atol=1e-10):
        raise ValueError("projector must satisfy P^2 = P = P^dagger")
    for e in ops:
        if e.shape != p.shape:
            raise ValueError("error operators must match the projector dimension")
    rank = float(np.real(np.trace(p)))
    m = len(ops)
    mu = np.zeros((m, m), dtype=complex)
    recoverable = True
    for i in range(m):
        for j in range(m):
            block = p @ ops[i].conj().T @ ops[j] @ p
            mu[i, j] = np.trace(block) / rank
            if np.max(np.abs(block - mu[i, j] * p)) > atol:
                recoverable = False
    return recoverable, mu
