"""Textbook circuit algorithms built on the dense simulator.

Hadamard tests (real and imaginary parts), three flavors of quantum phase
estimation, dense coding, teleportation, and a linear-system solver with a
phase-estimation eigenvalue register.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .core import (
    CNOT,
    H,
    SDAG,
    X,
    Y,
    Z,
    apply_circuit,
    apply_gate,
    as_source,
    basis_state,
    born_probabilities,
    controlled,
    measure_z,
    n_qubits,
    normalize,
    phase_gate,
    qft_circuit,
    tensor_product,
)

EIGENSTATE_TOL = 1e-8


# ---------------------------------------------------------------------------
# Hadamard test


def _hadamard_pre_measurement(U, psi, part: str, ancilla_phase: float = 0.0):
    """State of ancilla+system just before the ancilla measurement."""
    U = np.asarray(U, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if U.shape[0] != psi.shape[0]:
        raise ValueError("gate arity does not match the state")
    if part not in ("real", "imag"):
        raise ValueError(f"part must be 'real' or 'imag', got {part!r}")
    n = n_qubits(psi)
    state = tensor_product(basis_state(1, 0), psi)
    state = apply_gate(state, H, [0])
    if part == "imag":
        state = apply_gate(state, SDAG, [0])
    state = apply_gate(state, controlled(U), list(range(n + 1)))
    if ancilla_phase != 0.0:
        state = apply_gate(state, phase_gate(ancilla_phase), [0])
    return apply_gate(state, H, [0])


def hadamard_test_probability(U, psi, part: str = "real") -> float:
    """Exact P(ancilla=0) of the test: (1 +/- Re/Im <psi|U|psi>)/2."""
    state = _hadamard_pre_measurement(U, psi, part)
    return float(born_probabilities(state, [0])[0])


def _sample_fraction_zero(p0: float, shots: int, rng, start: int = 0) -> float:
    uniforms = as_source(rng).shot_uniforms(shots, start=start)
    return float(np.count_nonzero(uniforms < p0)) / shots


def hadamard_test(U, psi, part: str = "real", shots: int = 1, rng=None) -> float:
    """Shot-sampled estimator 2*(fraction of outcome 0) - 1.

    Unbiased for Re<psi|U|psi> (part="real") or Im<psi|U|psi> ("imag").
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p0 = hadamard_test_probability(U, psi, part)
    return 2.0 * _sample_fraction_zero(p0, shots, rng) - 1.0


# ---------------------------------------------------------------------------
# phase estimation


@dataclass(frozen=True)
class PhaseEstimate:
    """A phase in [0, 1) with how it was obtained.

    ``window`` is the half-open interval the estimate pins down when only
    one shot of information is available; ``bits`` are most-significant
    first; ``ambiguous`` reports a bit decision that sat within 1e-6 of
    P(0)=1/2.
    """

    phi_hat: float
    n_bits: int
    shots_used: int
    bits: tuple = ()
    ambiguous: bool = False
    window: tuple | None = None


def _check_eigenstate(U, psi):
    expect = np.vdot(psi, U @ psi)
    if np.linalg.norm(U @ psi - expect * psi) > EIGENSTATE_TOL:
        raise ValueError("psi is not an eigenstate of U")


def qpe_single(U, psi, shots: int = 1, rng=None) -> PhaseEstimate:
    """Phase of U|psi> = e^{2 pi i phi}|psi> from single-ancilla tests.

    With one shot, returns the half-interval the outcome pins down; with
    more, combines the real and imaginary tests (shots each) and resolves
    the quadrant via atan2.
    """
    U = np.asarray(U, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    _check_eigenstate(U, psi)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if shots == 1:
        p0 = hadamard_test_probability(U, psi, "real")
        outcome = 0 if as_source(rng).stream(0).random() < p0 else 1
        phi_bar = 0.0 if outcome == 0 else 0.5
        return PhaseEstimate(
            phi_bar, n_bits=0, shots_used=1, window=(phi_bar, phi_bar + 0.5)
        )
    cos_hat = 2.0 * _sample_fraction_zero(
        hadamard_test_probability(U, psi, "real"), shots, rng, start=0
    ) - 1.0
    sin_hat = 2.0 * _sample_fraction_zero(
        hadamard_test_probability(U, psi, "imag"), shots, rng, start=shots
    ) - 1.0
    phi_hat = (np.arctan2(sin_hat, cos_hat) / (2 * np.pi)) % 1.0
    return PhaseEstimate(float(phi_hat), n_bits=0, shots_used=2 * shots)


def matrix_power_pow2(U, j: int) -> np.ndarray:
    """U^(2^j) by repeated squaring."""
    out = np.asarray(U, dtype=complex)
    for _ in range(j):
        out = out @ out
    return out


AMBIGUITY_DELTA = 1e-6


def qpe_kitaev(U, psi, d: int, shots_per_bit: int = 0, rng=None) -> PhaseEstimate:
    """Extract d phase bits, least significant first, via powers U^(2^(d-1-k)).

    Each step k measures the shifted phase (.phi_k ... phi_0) with the
    already-known tail subtracted by an ancilla phase gate, so an exact
    d-bit phase gives P(0) in {0, 1} and the bit is read off exactly.
    ``shots_per_bit=0`` uses exact probabilities; sampled bits use
    deterministic rounding of the observed fraction. ``ambiguous`` is set
    when any step lands within 1e-6 of P(0)=1/2, which only happens when
    the phase has more than d bits.
    """
    if d < 1:
        raise ValueError("need at least one bit")
    U = np.asarray(U, dtype=complex)
    pow2 = [np.asarray(U, dtype=complex)]
    for _ in range(d - 1):
        pow2.append(pow2[-1] @ pow2[-1])
    bits_lsb: list[int] = []
    tail = 0.0  # (.phi_{k-1} ... phi_0)
    ambiguous = False
    for k in range(d):
        state = _hadamard_pre_measurement(
            pow2[d - 1 - k], psi, "real", ancilla_phase=-np.pi * tail
        )
        p0 = float(born_probabilities(state, [0])[0])
        if shots_per_bit > 0:
            frac0 = _sample_fraction_zero(p0, shots_per_bit, rng, start=k * shots_per_bit)
        else:
            frac0 = p0
        if abs(frac0 - 0.5) < AMBIGUITY_DELTA:
            ambiguous = True
        bit = 1 if frac0 < 0.5 else 0
        bits_lsb.append(bit)
        tail = (bit + tail) / 2.0
    phi_hat = sum(b * 2.0 ** (k - d) for k, b in enumerate(bits_lsb))
    return PhaseEstimate(
        phi_hat,
        n_bits=d,
        shots_used=d * shots_per_bit,
        bits=tuple(reversed(bits_lsb)),
        ambiguous=ambiguous,
    )


def qpe_n(U, psi, n_ancillas: int) -> PhaseEstimate:
    """n-ancilla phase estimation: Hadamards, controlled powers, inverse QFT.

    For an eigenstate with an exactly n-bit phase the register reads
    |phi * 2^n> deterministically.
    """
    U = np.asarray(U, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    _check_eigenstate(U, psi)
    probs = born_probabilities(qpe_state(U, psi, n_ancillas), range(n_ancillas))
    k = int(np.argmax(probs))
    return PhaseEstimate(k / 2.0**n_ancillas, n_bits=n_ancillas, shots_used=0)


def qpe_state(U, psi, d: int) -> np.ndarray:
    """Joint state after the inverse QFT, register qubits 0..d-1 first.

    For psi = sum_j beta_j |v_j> with exactly d-bit phases this is the
    entangled sum_j beta_j |phi_j * 2^d>|v_j>.
    """
    U = np.asarray(U, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    n = n_qubits(psi)
    state = tensor_product(basis_state(d, 0), psi)
    for q in range(d):
        state = apply_gate(state, H, [q])
    sys_targets = list(range(d, d + n))
    for q in range(d):
        power = matrix_power_pow2(U, d - 1 - q)
        state = apply_gate(state, controlled(power), [q] + sys_targets)
    return _apply_on_register(state, qft_circuit(d, inverse=True), range(d))


def _apply_on_register(state, circuit, regs):
    regs = list(regs)
    for gate, targets in circuit:
        state = apply_gate(state, gate, [regs[t] for t in targets])
    return state


def qpe_register_distribution(U, psi, d: int) -> np.ndarray:
    """Outcome distribution of the d-qubit register."""
    return born_probabilities(qpe_state(U, psi, d), range(d))


# ---------------------------------------------------------------------------
# dense coding


BELL_PSI_PLUS = (core.ket("00") + core.ket("11")) / np.sqrt(2)
BELL_PSI_MINUS = (core.ket("00") - core.ket("11")) / np.sqrt(2)
BELL_PHI_PLUS = (core.ket("10") + core.ket("01")) / np.sqrt(2)
BELL_PHI_MINUS = (core.ket("01") - core.ket("10")) / np.sqrt(2)

# encoding applied to the sender's qubit of (|00>+|11>)/sqrt(2)
DENSE_ENCODING = {
    (0, 0): np.eye(2, dtype=complex),
    (0, 1): X,
    (1, 0): Z,
    (1, 1): 1j * Y,
}


def encode_dense(x: int, y: int) -> np.ndarray:
    """Two classical bits -> one of the four Bell states."""
    if x not in (0, 1) or y not in (0, 1):
        raise ValueError("inputs must be bits")
    return apply_gate(BELL_PSI_PLUS, DENSE_ENCODING[(x, y)], [0])


def dense_coding(x: int, y: int, rng=None) -> tuple:
    """Send two bits with one qubit; the Bell measurement returns them."""
    state = encode_dense(x, y)
    state = apply_gate(state, CNOT, [0, 1])
    state = apply_gate(state, H, [0])
    if rng is None:
        probs = born_probabilities(state, [0, 1])
        idx = int(np.argmax(probs))
        bits = ((idx >> 1) & 1, idx & 1)
    else:
        bits, _ = core.measure_register(state, [0, 1], core.as_generator(rng))
    return bits


# ---------------------------------------------------------------------------
# teleportation


# correction on the receiver's qubit, keyed by the sender's two outcomes
TELEPORT_CORRECTION = {
    (0, 0): X,
    (0, 1): np.eye(2, dtype=complex),
    (1, 0): 1j * Y,
    (1, 1): Z,
}


def teleport_branch(psi, rng=None, force=None):
    """Run the protocol; returns ((q0, q1), receiver state).

    ``force`` picks the sender's measurement branch explicitly.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise ValueError("teleport takes a single-qubit state")
    state = tensor_product(psi, BELL_PHI_PLUS)
    state = apply_gate(state, CNOT, [0, 1])
    state = apply_gate(state, H, [0])
    if force is None:
        gen = core.as_generator(rng)
        q0, state = measure_z(state, 0, gen)
        q1, state = measure_z(state, 1, gen)
    else:
        q0, q1 = force
        _, state = measure_z(state, 0, force=q0)
        _, state = measure_z(state, 1, force=q1)
    receiver = state.reshape(2, 2, 2)[q0, q1, :]
    receiver = normalize(receiver)
    corrected = TELEPORT_CORRECTION[(q0, q1)] @ receiver
    return (q0, q1), corrected


def teleport(psi, rng=None, force=None) -> np.ndarray:
    """Teleport a single-qubit state; output matches the input exactly."""
    _, out = teleport_branch(psi, rng, force)
    return out


def teleport_branch_probabilities(psi) -> np.ndarray:
    """Distribution of the sender's four outcomes (uniform 1/4 each)."""
    psi = np.asarray(psi, dtype=complex)
    state = tensor_product(psi, BELL_PHI_PLUS)
    state = apply_gate(state, CNOT, [0, 1])
    state = apply_gate(state, H, [0])
    return born_probabilities(state, [0, 1])


# ---------------------------------------------------------------------------
# linear-system solver


@dataclass(frozen=True)
class LinearSystem:
    """A x = b with A Hermitian, eigenvalues in (0, 1), and |b| = 1."""

    A: np.ndarray
    b: np.ndarray

    def __init__(self, A, b):
        A = np.asarray(A, dtype=complex)
        b = np.asarray(b, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != b.shape[0]:
            raise ValueError("A must be square and match b")
        n_qubits(A)
        if np.max(np.abs(A - A.conj().T)) > 1e-10:
            raise ValueError("A must be Hermitian")
        if abs(np.linalg.norm(b) - 1.0) > 1e-10:
            raise ValueError("b must be a unit vector")
        eigs = np.linalg.eigvalsh(A)
        if eigs.min() <= 0.0 or eigs.max() >= 1.0:
            raise ValueError("eigenvalues of A must lie strictly in (0, 1)")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)


def _rotation_block(d: int, C: float) -> np.ndarray:
    """Unitary on flag+register: |0>|m> -> sqrt(1-C^2/lam^2)|0>|m> + (C/lam)|1>|m>.

    lam = m/2^d; register values with lam < C are left alone (they carry no
    amplitude when C <= lambda_min).
    """
    dim = 1 << d
    W = np.eye(2 * dim, dtype=complex)
    for m in range(1, dim):
        lam = m / dim
        if lam + 1e-15 < C:
            continue
        ratio = min(C / lam, 1.0)
        c = np.sqrt(max(1.0 - ratio**2, 0.0))
        W[m, m] = c
        W[dim + m, m] = ratio
        W[m, dim + m] = -ratio
        W[dim + m, dim + m] = c
    return W


def hhl(system: LinearSystem, d: int, C: float, rng=None, max_retries: int = 10_000):
    """Solve A x = b on the simulator; returns (x_hat, p_success).

    Registers: flag qubit, d-bit eigenvalue register, system register.
    The eigenvalue register is uncomputed back to |0...0>; the flag is
    post-selected on 1 by sampling, retrying up to ``max_retries``.
    """
    if d < 1:
        raise ValueError("need at least one eigenvalue bit")
    A, b = system.A, system.b
    eigs = np.linalg.eigvalsh(A)
    scaled = eigs * (1 << d)
    if np.max(np.abs(scaled - np.round(scaled))) > 1e-9:
        raise ValueError(f"eigenvalues lack an exact {d}-bit representation")
    lam_min = float(eigs.min())
    if not 0.0 < C <= lam_min + 1e-12:
        raise ValueError("C must satisfy 0 < C <= lambda_min")

    n = n_qubits(b)
    vals, vecs = np.linalg.eigh(A)
    U = (vecs * np.exp(2j * np.pi * vals)) @ vecs.conj().T

    flag, regs, sys_regs = 0, list(range(1, d + 1)), list(range(d + 1, d + 1 + n))
    state = tensor_product(basis_state(d + 1, 0), b)
    for q in regs:
        state = apply_gate(state, H, [q])
    for i, q in enumerate(regs):
        power = matrix_power_pow2(U, d - 1 - i)
        state = apply_gate(state, controlled(power), [q] + sys_regs)
    state = _apply_on_register(state, qft_circuit(d, inverse=True), regs)
    state = apply_gate(state, _rotation_block(d, C), [flag] + regs)

    p_success = float(born_probabilities(state, [flag])[1])
    rs = as_source(rng) if rng is not None else None
    attempts = 0
    while True:
        if rs is None:
            break  # deterministic post-selection
        attempts += 1
        if rs.stream(attempts - 1).random() < p_success:
            break
        if attempts >= max_retries:
            raise RuntimeError(
                f"post-selection failed {max_retries} times "
                f"(p_success = {p_success:.3e})"
            )
    _, state = measure_z(state, flag, force=1)

    state = _apply_on_register(state, qft_circuit(d), regs)
    for i, q in reversed(list(enumerate(regs))):
        power = matrix_power_pow2(U, d - 1 - i).conj().T
        state = apply_gate(state, controlled(power), [q] + sys_regs)
    for q in regs:
        state = apply_gate(state, H, [q])

    reg_zero = float(born_probabilities(state, regs)[0])
    if abs(reg_zero - 1.0) > 1e-8:
        raise RuntimeError("eigenvalue register failed to uncompute")
    x_hat = normalize(state.reshape(2, 1 << d, 1 << n)[1, 0, :])
    return x_hat, p_success
