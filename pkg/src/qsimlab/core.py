"""Dense state-vector and density-matrix simulation primitives.

Conventions used across the package:

* Qubit 0 is the leftmost ket label and the most significant bit of the
  amplitude index: ``|q0 q1 ... q_{n-1}>`` lives at index
  ``q0*2**(n-1) + q1*2**(n-2) + ... + q_{n-1}``.
* ``tensor_product(a, b)`` puts ``a`` on the more significant labels.
* Measurement outcome 0 corresponds to Z eigenvalue +1.
* Collapsed states are renormalized without any phase adjustment; state
  equality is asserted up to global phase via ``fidelity``.
* Registers are dense; any construction above dimension 2**26 is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIM = 1 << 26

_ALGEBRA_TOL = 1e-10


# ---------------------------------------------------------------------------
# random numbers


class RandomSource:
    """Counter-based random source with independent per-shot substreams.

    Built on Philox: ``stream(i)`` starts the counter at block
    ``(i + 1) << 128``, so substreams never overlap each other or the base
    generator (block 0) and depend only on ``(seed, i)``, not on the order
    in which they are created.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < 1 << 64:
            raise ValueError("seed must be a 64-bit non-negative integer")
        self.seed = seed
        self.generator = np.random.Generator(np.random.Philox(key=seed))

    def stream(self, index: int) -> np.random.Generator:
        """Generator for shot ``index``, independent of creation order."""
        if not 0 <= index < (1 << 63) - 1:
            raise ValueError("stream index out of range")
        return np.random.Generator(
            np.random.Philox(key=self.seed, counter=(index + 1) << 128)
        )

    def shot_uniforms(self, shots: int, per_shot: int = 1, start: int = 0):
        """Uniform draws for shots [start, start+shots), vectorized.

        Shot i owns the fixed slice [i*per_shot, (i+1)*per_shot) of a
        dedicated counter lane (block 2^63, disjoint from ``stream``), so
        its values depend only on (seed, i, per_shot), never on call
        order. Shape (shots,) when per_shot is 1, else (shots, per_shot).
        """
        if shots < 0 or per_shot < 1 or start < 0:
            raise ValueError("bad shot-lane request")
        gen = np.random.Generator(np.random.Philox(key=self.seed, counter=1 << 191))
        vals = gen.random((start + shots) * per_shot)[start * per_shot :]
        return vals if per_shot == 1 else vals.reshape(shots, per_shot)

    def __repr__(self):
        return f"RandomSource(seed={self.seed})"


def as_generator(rng) -> np.random.Generator:
    """Accept a RandomSource, Generator, or integer seed."""
    if isinstance(rng, RandomSource):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RandomSource(int(rng)).generator
    raise TypeError(f"not a usable random source: {rng!r}")


def as_source(rng) -> RandomSource:
    if isinstance(rng, RandomSource):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RandomSource(int(rng))
    raise TypeError(f"not a usable random source: {rng!r}")


# ---------------------------------------------------------------------------
# states


def _check_dim(dim: int):
    if dim > MAX_DIM:
        raise ValueError(f"register dimension {dim} exceeds 2^26")


def n_qubits(obj) -> int:
    dim = np.asarray(obj).shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def basis_state(n: int, index: int) -> np.ndarray:
    _check_dim(1 << n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[index] = 1.0
    return psi


def ket(bits: str) -> np.ndarray:
    """``ket("10")`` is |10>: qubit 0 (leftmost label) most significant."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"not a bit string: {bits!r}")
    return basis_state(len(bits), int(bits, 2))


def zero_state(n: int) -> np.ndarray:
    return basis_state(n, 0)


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / nrm


def random_state(n: int, rng) -> np.ndarray:
    gen = as_generator(rng)
    dim = 1 << n
    return normalize(gen.normal(size=dim) + 1j * gen.normal(size=dim))


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for unit vectors (phase-insensitive overlap)."""
    return float(abs(np.vdot(np.asarray(a), np.asarray(b))) ** 2)


def states_equal(a, b, tol: float = 1e-10) -> bool:
    """Equality up to global phase for normalized states."""
    return abs(1.0 - fidelity(a, b)) <= tol


# ---------------------------------------------------------------------------
# gates

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
T = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)
SDAG = S.conj().T
TDAG = T.conj().T

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex
    )


def rn(theta: float, axis) -> np.ndarray:
    """Rotation by ``theta`` about unit axis n: cos(t/2) I - i sin(t/2) n.sigma."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,):
        raise ValueError("axis must have three components")
    if abs(np.linalg.norm(axis) - 1.0) > 1e-9:
        raise ValueError("rotation axis must be normalized")
    ndots = axis[0] * X + axis[1] * Y + axis[2] * Z
    return np.cos(theta / 2) * I2 - 1j * np.sin(theta / 2) * ndots


def phase_gate(theta: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)


def is_unitary(g: np.ndarray, tol: float = _ALGEBRA_TOL) -> bool:
    g = np.asarray(g)
    return g.ndim == 2 and g.shape[0] == g.shape[1] and bool(
        np.max(np.abs(g.conj().T @ g - np.eye(g.shape[0]))) < tol
    )


_FIXED_GATES = {
    "X": X, "Y": Y, "Z": Z, "H": H,
    "S": S, "T": T, "Sdag": SDAG, "Tdag": TDAG,
}
_ROTATIONS = {"Rx": rx, "Ry": ry, "Rz": rz}


def standard_gate(name: str, theta: float | None = None, axis=None) -> np.ndarray:
    """Named single-qubit gate in its computational-basis form."""
    if name in _FIXED_GATES:
        if theta is not None or axis is not None:
            raise ValueError(f"{name} takes no parameters")
        g = _FIXED_GATES[name].copy()
    elif name in _ROTATIONS:
        if theta is None:
            raise ValueError(f"{name} requires an angle")
        g = _ROTATIONS[name](theta)
    elif name == "Rn":
        if theta is None or axis is None:
            raise ValueError("Rn requires an angle and an axis")
        g = rn(theta, axis)
    else:
        raise ValueError(f"unknown gate name: {name!r}")
    if not is_unitary(g):
        raise ValueError(f"gate {name} failed the unitarity check")
    return g


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; ``a`` takes the more-significant qubit labels."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("operands must both be vectors or both be matrices")
    _check_dim(a.shape[0] * b.shape[0])
    return np.kron(a, b)


def kron_all(*ops) -> np.ndarray:
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = tensor_product(out, op)
    return out


def pauli_matrix(word: str) -> np.ndarray:
    """Dense matrix of a tensor product of I/X/Y/Z letters."""
    if not word or any(c not in PAULIS for c in word):
        raise ValueError(f"not a Pauli word: {word!r}")
    _check_dim(1 << len(word))
    return kron_all(*(PAULIS[c] for c in word))


def controlled(g: np.ndarray) -> np.ndarray:
    """Controlled-U, control on the new most-significant qubit."""
    g = np.asarray(g, dtype=complex)
    if not is_unitary(g):
        raise ValueError("controlled() requires a unitary gate")
    dim = g.shape[0]
    _check_dim(2 * dim)
    out = np.eye(2 * dim, dtype=complex)
    out[dim:, dim:] = g
    return out


# ---------------------------------------------------------------------------
# applying gates


def _check_targets(n: int, targets, arity: int):
    if len(targets) != arity:
        raise ValueError(f"gate arity {arity} != {len(targets)} targets")
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets: {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise ValueError(f"target {t} out of range for {n} qubits")


def apply_gate(state: np.ndarray, gate: np.ndarray, targets) -> np.ndarray:
    """Apply ``gate`` to the listed qubits; identity on the rest.

    ``targets[0]`` is the gate's most-significant qubit slot.
    """
    state = np.asarray(state, dtype=complex)
    gate = np.asarray(gate, dtype=complex)
    n = n_qubits(state)
    k = n_qubits(gate)
    targets = list(targets)
    _check_targets(n, targets, k)
    psi = state.reshape([2] * n)
    psi = np.moveaxis(psi, targets, range(k))
    psi = (gate @ psi.reshape(1 << k, -1)).reshape([2] * n)
    psi = np.moveaxis(psi, range(k), targets)
    return np.ascontiguousarray(psi).reshape(-1)


def apply_circuit(state: np.ndarray, circuit) -> np.ndarray:
    """Apply an ordered list of (gate, targets) pairs."""
    for gate, targets in circuit:
        state = apply_gate(state, gate, targets)
    return state


def circuit_unitary(circuit, n: int) -> np.ndarray:
    """Dense unitary of a gate list on ``n`` qubits (columns = basis images)."""
    _check_dim(1 << n)
    out = np.eye(1 << n, dtype=complex)
    for j in range(1 << n):
        out[:, j] = apply_circuit(np.ascontiguousarray(out[:, j]), circuit)
    return out


# ---------------------------------------------------------------------------
# measurement


def born_probabilities(state: np.ndarray, qubits) -> np.ndarray:
    """Outcome distribution for measuring the listed qubits in order."""
    state = np.asarray(state, dtype=complex)
    n = n_qubits(state)
    qubits = list(qubits)
    _check_targets(n, qubits, len(qubits))
    psi = state.reshape([2] * n)
    psi = np.moveaxis(psi, qubits, range(len(qubits)))
    probs = np.abs(psi.reshape(1 << len(qubits), -1)) ** 2
    return probs.sum(axis=1)


def measure_z(state: np.ndarray, qubit: int, rng=None, *, force: int | None = None):
    """Projective Z measurement of one qubit.

    Returns ``(outcome, collapsed)``; outcome 0 is the Z=+1 branch. With
    ``force`` the requested branch is taken; a zero-probability branch is
    an error.
    """
    state = np.asarray(state, dtype=complex)
    n = n_qubits(state)
    _check_targets(n, [qubit], 1)
    psi = np.moveaxis(state.reshape([2] * n), qubit, 0)
    p = np.abs(psi.reshape(2, -1)) ** 2
    p0 = float(p[0].sum())
    if force is None:
        if rng is None:
            raise ValueError("sampling a measurement requires an rng")
        outcome = 0 if as_generator(rng).random() < p0 else 1
    else:
        outcome = int(force)
        if outcome not in (0, 1):
            raise ValueError("forced outcome must be 0 or 1")
        if (p0 if outcome == 0 else 1.0 - p0) < 1e-12:
            raise ValueError(f"forced outcome {outcome} has zero probability")
    proj = psi.copy()
    proj[1 - outcome] = 0.0
    collapsed = normalize(np.moveaxis(proj, 0, qubit).reshape(-1))
    return outcome, collapsed


def measure_register(state: np.ndarray, qubits, rng):
    """Measure several qubits at once; returns (bits tuple, collapsed)."""
    qubits = list(qubits)
    gen = as_generator(rng)
    probs = born_probabilities(state, qubits)
    idx = int(gen.choice(len(probs), p=probs / probs.sum()))
    bits = tuple((idx >> (len(qubits) - 1 - i)) & 1 for i in range(len(qubits)))
    collapsed = state
    for q, b in zip(qubits, bits):
        _, collapsed = measure_z(collapsed, q, force=b)
    return bits, collapsed


def expectation_pauli(state: np.ndarray, p) -> float:
    """<P> for a Pauli word on a state vector or density matrix."""
    word = getattr(p, "word", p)
    if not isinstance(word, str):
        raise ValueError(f"not a Pauli word: {p!r}")
    phase = getattr(p, "phase", 1)
    arr = np.asarray(state, dtype=complex)
    n = n_qubits(arr)
    if len(word) != n:
        raise ValueError(f"Pauli word length {len(word)} != {n} qubits")
    letters = [(i, PAULIS[c]) for i, c in enumerate(word) if c != "I"]
    if arr.ndim == 1:
        acted = arr
        for i, m in letters:
            acted = apply_gate(acted, m, [i])
        val = phase * np.vdot(arr, acted)
    elif arr.ndim == 2:
        acted = arr
        for i, m in letters:
            acted = _left_multiply(acted, m, i, n)
        val = phase * np.trace(acted)
    else:
        raise ValueError("state must be a vector or a matrix")
    if abs(val.imag) > _ALGEBRA_TOL:
        raise ValueError(f"expectation has imaginary residue {val.imag:g}")
    return float(val.real)


def partial_trace(state: np.ndarray, keep) -> np.ndarray:
    """Reduced density matrix over the kept qubits (in the given order)."""
    arr = np.asarray(state, dtype=complex)
    n = n_qubits(arr)
    keep = list(keep)
    _check_targets(n, keep, len(keep))
    if arr.ndim == 1:
        psi = np.moveaxis(arr.reshape([2] * n), keep, range(len(keep)))
        m = psi.reshape(1 << len(keep), -1)
        return m @ m.conj().T
    rho = arr.reshape([2] * (2 * n))
    order = keep + [q for q in range(n) if q not in keep]
    rho = np.moveaxis(rho, order + [n + q for q in order], range(2 * n))
    k = len(keep)
    rho = rho.reshape(1 << k, 1 << (n - k), 1 << k, 1 << (n - k))
    return np.einsum("aibi->ab", rho)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


# ---------------------------------------------------------------------------
# density matrices and channels


def density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def validate_density(rho: np.ndarray, tol: float = _ALGEBRA_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("density matrix trace differs from 1")
    if np.linalg.eigvalsh(rho).min() < -1e-9:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def _left_multiply(rho: np.ndarray, gate: np.ndarray, target: int, n: int):
    """gate (on one qubit) @ rho, acting on the row index."""
    t = rho.reshape([2] * (2 * n))
    t = np.moveaxis(t, target, 0)
    t = (gate @ t.reshape(2, -1)).reshape([2] * (2 * n))
    t = np.moveaxis(t, 0, target)
    return t.reshape(rho.shape)


def _conjugate_on_targets(rho: np.ndarray, op: np.ndarray, targets, n: int):
    """op rho op^dagger with op acting on the listed qubits."""
    k = len(targets)
    t = rho.reshape([2] * (2 * n))
    t = np.moveaxis(t, targets, range(k))
    t = (op @ t.reshape(1 << k, -1)).reshape([2] * (2 * n))
    t = np.moveaxis(t, range(k), targets)
    cols = [n + q for q in targets]
    t = np.moveaxis(t, cols, range(k))
    t = (op.conj() @ t.reshape(1 << k, -1)).reshape([2] * (2 * n))
    t = np.moveaxis(t, range(k), cols)
    return np.ascontiguousarray(t).reshape(rho.shape)


def apply_gate_density(rho: np.ndarray, gate: np.ndarray, targets) -> np.ndarray:
    """U rho U^dagger on the listed qubits."""
    rho = np.asarray(rho, dtype=complex)
    gate = np.asarray(gate, dtype=complex)
    n = n_qubits(rho)
    k = n_qubits(gate)
    targets = list(targets)
    _check_targets(n, targets, k)
    return _conjugate_on_targets(rho, gate, targets, n)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A completely positive trace-preserving map {E_i}."""

    ops: tuple

    def __init__(self, ops):
        ops = tuple(np.asarray(op, dtype=complex) for op in ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(op.shape != (dim, dim) for op in ops):
            raise ValueError("Kraus operators must be square and same-sized")
        total = sum(op.conj().T @ op for op in ops)
        if np.max(np.abs(total - np.eye(dim))) > _ALGEBRA_TOL:
            raise ValueError("Kraus completeness violated: sum E^dag E != 1")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]


def apply_kraus(rho: np.ndarray, ch: KrausChannel, targets=None) -> np.ndarray:
    """sum_i E_i rho E_i^dagger; on a subset of qubits if targets given."""
    rho = np.asarray(rho, dtype=complex)
    if targets is None:
        if ch.dim != rho.shape[0]:
            raise ValueError("channel dimension does not match the state")
        return sum(op @ rho @ op.conj().T for op in ch.ops)
    targets = list(targets)
    n = n_qubits(rho)
    _check_targets(n, targets, ch.dim.bit_length() - 1)
    return sum(_conjugate_on_targets(rho, op, targets, n) for op in ch.ops)


# ---------------------------------------------------------------------------
# quantum Fourier transform


def qft_circuit(n: int, inverse: bool = False):
    """Gate list for F (or F^dagger) with F|j> = 2^{-n/2} sum_k e^{2pi i jk/2^n}|k>."""
    if n < 1:
        raise ValueError("need at least one qubit")
    _check_dim(1 << n)
    gates = []
    for i in range(n):
        gates.append((H, (i,)))
        for m in range(i + 1, n):
            theta = 2 * np.pi / (1 << (m - i + 1))
            gates.append((controlled(phase_gate(theta)), (m, i)))
    for i in range(n // 2):
        gates.append((SWAP, (i, n - 1 - i)))
    if inverse:
        gates = [(g.conj().T, t) for g, t in reversed(gates)]
    return gates
