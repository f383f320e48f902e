"""Ising encodings, annealing simulation, QAOA, and a Pauli-string VQE.

The cost Hamiltonian is H_C = -sum_i h_i Z_i - sum_{i<j} J_ij Z_i Z_j plus
a configuration-independent constant. Spins s_i = +-1 map to bits via
z_i = (1 - s_i)/2, so |0> is spin up. Diagonal energies are indexed by the
usual amplitude ordering (qubit 0 most significant).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import H as H_GATE
from .core import (
    CNOT,
    X,
    apply_gate,
    as_generator,
    expectation_pauli,
    n_qubits,
    rx,
    rz,
    zero_state,
)

ENUM_CAP = 20


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class IsingModel:
    """Fields h_i, strictly upper-triangular couplings J_ij, and an offset."""

    h: np.ndarray
    J: np.ndarray
    constant: float = 0.0

    def __init__(self, h, J, constant=0.0):
        h = np.asarray(h, dtype=float)
        J = np.asarray(J, dtype=float)
        n = h.shape[0]
        if h.ndim != 1 or J.shape != (n, n):
            raise ValueError("h must be length n and J an n x n matrix")
        if np.any(J[np.tril_indices(n)] != 0.0):
            raise ValueError("J must be strictly upper-triangular")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "constant", float(constant))

    @property
    def n(self) -> int:
        return self.h.shape[0]


@dataclass(frozen=True)
class PauliHamiltonian:
    """H = sum_alpha h_alpha P_alpha with real coefficients."""

    terms: tuple

    def __init__(self, terms):
        terms = tuple((float(c), str(w)) for c, w in terms)
        if not terms:
            raise ValueError("need at least one term")
        length = len(terms[0][1])
        for _, w in terms:
            if len(w) != length or any(ch not in "IXYZ" for ch in w):
                raise ValueError(f"bad Pauli word {w!r}")
        object.__setattr__(self, "terms", terms)

    @property
    def n(self) -> int:
        return len(self.terms[0][1])

    def to_matrix(self) -> np.ndarray:
        from .core import pauli_matrix

        return sum(c * pauli_matrix(w) for c, w in self.terms)


@dataclass(frozen=True)
class Schedule:
    """Monotone s(t) samples on [0, tau] with s(0)=0 and s(tau)=1."""

    tau: float
    s: np.ndarray
    steps: int

    def __init__(self, tau, s):
        s = np.asarray(s, dtype=float)
        if s.ndim != 1 or s.shape[0] < 2:
            raise ValueError("schedule needs at least two samples")
        if s[0] != 0.0 or s[-1] != 1.0:
            raise ValueError("schedule endpoints must be exactly 0 and 1")
        if np.any(np.diff(s) < 0):
            raise ValueError("schedule must be non-decreasing")
        if tau <= 0:
            raise ValueError("tau must be positive")
        object.__setattr__(self, "tau", float(tau))
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "steps", s.shape[0] - 1)


def linear_schedule(tau: float, steps: int | None = None) -> Schedule:
    """s(t) = t/tau sampled on ``steps`` intervals (default 1000 per unit)."""
    if steps is None:
        steps = max(int(np.ceil(1000 * tau)), 1)
    return Schedule(tau, np.linspace(0.0, 1.0, steps + 1))


@dataclass(frozen=True)
class QaoaParams:
    """Layer angles (gamma_k, beta_k), k = 1..p.

    Natural domains are gamma in [0, 2pi) and beta in [0, pi) thanks to
    sigma_x periodicity; values outside are accepted and never wrapped.
    """

    p: int
    gamma: np.ndarray
    beta: np.ndarray

    def __init__(self, gamma, beta):
        gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
        beta = np.atleast_1d(np.asarray(beta, dtype=float))
        if gamma.shape != beta.shape or gamma.ndim != 1 or gamma.shape[0] < 1:
            raise ValueError("gamma and beta must be equal-length, p >= 1")
        if not (np.all(np.isfinite(gamma)) and np.all(np.isfinite(beta))):
            raise ValueError("angles must be finite")
        object.__setattr__(self, "p", gamma.shape[0])
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "beta", beta)


# ---------------------------------------------------------------------------
# encodings


def subset_sum_to_ising(m: int, ns) -> IsingModel:
    """Minimum-energy spin strings select subsets of ``ns`` summing to ``m``.

    Energies satisfy ising_energy + constant = (sum n_i z_i - m)^2 with
    z_i = (1 - s_i)/2.
    """
    ns = np.asarray(ns, dtype=float)
    if ns.size == 0:
        raise ValueError("ns must be nonempty")
    n = ns.shape[0]
    h = (0.5 * ns.sum() - m) * ns
    J = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    J[iu] = -0.5 * np.outer(ns, ns)[iu]
    constant = (0.5 * ns.sum() - m) ** 2 + 0.25 * np.sum(ns**2)
    return IsingModel(h, J, constant)


def partition_to_ising(ns) -> IsingModel:
    """Minimum-energy spin strings split ``ns`` into equal-sum halves.

    Energies satisfy ising_energy + constant = (sum n_i s_i)^2.
    """
    ns = np.asarray(ns, dtype=float)
    if ns.size == 0:
        raise ValueError("ns must be nonempty")
    n = ns.shape[0]
    J = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    J[iu] = -2.0 * np.outer(ns, ns)[iu]
    return IsingModel(np.zeros(n), J, constant=float(np.sum(ns**2)))


def spins_from_bits(bits) -> np.ndarray:
    return 1 - 2 * np.asarray(bits, dtype=int)


def ising_energy(model: IsingModel, spins) -> float:
    """-sum h_i s_i - sum_{i<j} J_ij s_i s_j (offset not included)."""
    s = np.asarray(spins, dtype=float)
    if s.shape != (model.n,) or np.any(np.abs(s) != 1):
        raise ValueError("spins must be a +-1 vector of length n")
    return float(-model.h @ s - s @ model.J @ s)


def ising_energy_bits(model: IsingModel, bits) -> float:
    return ising_energy(model, spins_from_bits(bits))


def all_energies(model: IsingModel) -> np.ndarray:
    """Cost C(z) = ising_energy + constant for every z, amplitude-ordered."""
    if model.n > ENUM_CAP:
        raise ValueError(f"enumeration capped at {ENUM_CAP} spins")
    n = model.n
    zs = ((np.arange(1 << n)[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(int)
    spins = 1 - 2 * zs
    pair = np.einsum("ki,ij,kj->k", spins, model.J, spins)
    return -(spins @ model.h) - pair + model.constant


def brute_force_ground(model):
    """Exact ground energy and all minimizing states.

    Ising models are enumerated (returns bit tuples); PauliHamiltonians
    are diagonalized densely (returns eigenvectors of the ground space).
    """
    if isinstance(model, IsingModel):
        costs = all_energies(model)
        emin = float(costs.min())
        states = [
            tuple((z >> (model.n - 1 - i)) & 1 for i in range(model.n))
            for z in np.nonzero(costs <= emin + 1e-9)[0]
        ]
        return emin, states
    if isinstance(model, PauliHamiltonian):
        if model.n > ENUM_CAP:
            raise ValueError(f"diagonalization capped at {ENUM_CAP} qubits")
        vals, vecs = np.linalg.eigh(model.to_matrix())
        emin = float(vals[0])
        cols = np.nonzero(vals <= emin + 1e-9)[0]
        return emin, [vecs[:, j] for j in cols]
    raise TypeError(f"unsupported model type: {type(model).__name__}")


def ising_to_pauli(model: IsingModel) -> PauliHamiltonian:
    """H_C as explicit Pauli strings (identity word carries the offset)."""
    n = model.n
    terms = []
    if model.constant != 0.0:
        terms.append((model.constant, "I" * n))
    for i in range(n):
        if model.h[i] != 0.0:
            terms.append((-model.h[i], "I" * i + "Z" + "I" * (n - i - 1)))
    for i in range(n):
        for j in range(i + 1, n):
            if model.J[i, j] != 0.0:
                word = "".join(
                    "Z" if q in (i, j) else "I" for q in range(n)
                )
                terms.append((-model.J[i, j], word))
    if not terms:
        terms.append((0.0, "I" * n))
    return PauliHamiltonian(terms)


# ---------------------------------------------------------------------------
# annealing


def mixer_hamiltonian(n: int) -> np.ndarray:
    """H_0 = -sum_i X_i (dense); ground state |+>^n at energy -n."""
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for i in range(n):
        out -= _embed_x(n, i)
    return out


def _embed_x(n: int, i: int) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for q in range(n):
        m = np.kron(m, X if q == i else np.eye(2))
    return m


def cost_hamiltonian(model: IsingModel) -> np.ndarray:
    return np.diag(all_energies(model).astype(complex))


@dataclass(frozen=True)
class AnnealResult:
    final_state: np.ndarray = field(repr=False)
    p_success: float
    min_gap: float
    trotter_error: float
    degenerate: bool
    ground_energy: float
    ground_states: list = field(repr=False)


def anneal(model: IsingModel, schedule: Schedule, mixer_sign: int = -1) -> AnnealResult:
    """Evolve the mixer ground state under H(t) = (1-s)H_0 + s H_C.

    H_0 = mixer_sign * sum_i X_i; the default -1 makes |+>^n the starting
    ground state (+1 starts from |->^n instead). Each piecewise-constant
    step exponentiates H at the midpoint-sampled s. Returns the
    overlap-squared with the exact ground manifold, the minimum spectral
    gap E_1 - E_0 along the schedule, and the worst per-step
    discretization error estimate dt * max(delta s) * |H_C - H_0| / 2.
    """
    if mixer_sign not in (-1, 1):
        raise ValueError("mixer_sign must be -1 or +1")
    n = model.n
    h0 = -mixer_sign * mixer_hamiltonian(n)
    hc = cost_hamiltonian(model)
    dt = schedule.tau / schedule.steps
    psi = np.full(1 << n, 1.0 / np.sqrt(1 << n), dtype=complex)
    if mixer_sign > 0:
        bits = np.arange(1 << n)
        parity = np.array([bin(z).count("1") & 1 for z in bits])
        psi *= np.where(parity, -1.0, 1.0)
    min_gap = np.inf
    max_ds = 0.0
    for k in range(schedule.steps):
        s_mid = 0.5 * (schedule.s[k] + schedule.s[k + 1])
        max_ds = max(max_ds, abs(schedule.s[k + 1] - schedule.s[k]))
        ham = (1 - s_mid) * h0 + s_mid * hc
        vals, vecs = np.linalg.eigh(ham)
        min_gap = min(min_gap, float(vals[1] - vals[0]))
        psi = vecs @ (np.exp(-1j * vals * dt) * (vecs.conj().T @ psi))
    norm_diff = float(np.max(np.abs(np.linalg.eigvalsh(hc - h0))))
    trotter_error = dt * max_ds * norm_diff / 2
    ground_energy, ground_states = brute_force_ground(model)
    p = sum(
        abs(psi[int("".join(map(str, z)), 2)]) ** 2 for z in ground_states
    )
    return AnnealResult(
        final_state=psi,
        p_success=float(p),
        min_gap=min_gap,
        trotter_error=trotter_error,
        degenerate=min_gap < 1e-9,
        ground_energy=ground_energy,
        ground_states=ground_states,
    )


def repetitions_for_success(p: float, target: float = 0.99) -> float:
    """Runs needed so at least one success has the target probability."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    return float(np.log(1 - target) / np.log(1 - p))


# ---------------------------------------------------------------------------
# QAOA


def qaoa_state(model: IsingModel, params: QaoaParams) -> np.ndarray:
    """|gamma, beta> built from the gate decomposition.

    Cost layer: Rz(-2 gamma h_i) per field and CNOT - Rz(-2 gamma J_ij) -
    CNOT per coupling; mixer layer: Rx(-2 beta) per qubit. The offset only
    contributes a global phase and is omitted.
    """
    n = model.n
    psi = zero_state(n)
    for q in range(n):
        psi = apply_gate(psi, H_GATE, [q])
    for k in range(params.p):
        gamma, beta = params.gamma[k], params.beta[k]
        for i in range(n):
            if model.h[i] != 0.0:
                psi = apply_gate(psi, rz(-2 * gamma * model.h[i]), [i])
        for i in range(n):
            for j in range(i + 1, n):
                if model.J[i, j] != 0.0:
                    psi = apply_gate(psi, CNOT, [i, j])
                    psi = apply_gate(psi, rz(-2 * gamma * model.J[i, j]), [j])
                    psi = apply_gate(psi, CNOT, [i, j])
        for i in range(n):
            psi = apply_gate(psi, rx(-2 * beta), [i])
    return psi


def qaoa_energy(model: IsingModel, params: QaoaParams) -> float:
    """E_p(gamma, beta) = sum_z P(z) C(z), evaluated exactly."""
    probs = np.abs(qaoa_state(model, params)) ** 2
    return float(probs @ all_energies(model))


def qaoa_optimize(model: IsingModel, p: int, budget: int, rng, init=None):
    """Coordinate-wise pattern search with golden-ratio step refinement.

    Derivative-free: each pass polls +-step on every coordinate, keeping
    improvements; stalled passes shrink the step by the golden ratio.
    Returns (best params, best energy, monotone best-so-far trace).
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if p < 1:
        raise ValueError("p must be >= 1")
    if init is None:
        gen = as_generator(rng)
        x = np.concatenate([gen.uniform(0, 2 * np.pi, p), gen.uniform(0, np.pi, p)])
    else:
        init = QaoaParams(*init) if isinstance(init, tuple) else init
        x = np.concatenate([init.gamma, init.beta])

    def params(vec):
        return QaoaParams(vec[:p], vec[p:])

    evals = 0

    def energy(vec):
        nonlocal evals
        evals += 1
        return qaoa_energy(model, params(vec))

    best_x = x.copy()
    best_e = energy(best_x)
    trace = [best_e]
    golden = (1 + np.sqrt(5)) / 2
    steps = np.concatenate([np.full(p, np.pi / 2), np.full(p, np.pi / 4)])
    while evals < budget:
        improved = False
        for i in range(2 * p):
            for sign in (+1, -1):
                if evals >= budget:
                    break
                trial = best_x.copy()
                trial[i] += sign * steps[i]
                e = energy(trial)
                if e < best_e - 1e-15:
                    best_x, best_e, improved = trial, e, True
                trace.append(best_e)
        if not improved:
            steps /= golden
            if np.max(steps) < 1e-6:
                break
    return params(best_x), float(best_e), trace


# ---------------------------------------------------------------------------
# VQE


def vqe_energy(hamiltonian: PauliHamiltonian, state: np.ndarray) -> float:
    """E = sum_alpha h_alpha <state|P_alpha|state>."""
    if hamiltonian.n != n_qubits(state):
        raise ValueError("word length does not match the state")
    return float(
        sum(c * expectation_pauli(state, w) for c, w in hamiltonian.terms)
    )


# ---------------------------------------------------------------------------
# serialization


def model_to_text(model: IsingModel) -> str:
    """Flat text form: n, field and coupling entries, constant.

    Floats are written with repr so the round trip is bit-exact.
    """
    lines = [f"n={model.n}"]
    for i, hi in enumerate(model.h):
        lines.append(f"h {i} {float(hi)!r}")
    for i in range(model.n):
        for j in range(i + 1, model.n):
            if model.J[i, j] != 0.0:
                lines.append(f"J {i} {j} {float(model.J[i, j])!r}")
    lines.append(f"constant={float(model.constant)!r}")
    return "\n".join(lines) + "\n"


def model_from_text(text: str) -> IsingModel:
    """Inverse of model_to_text; ignores blank lines and '#' comments."""
    n = None
    constant = 0.0
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("n="):
                n = int(line[2:])
            elif line.startswith("constant="):
                constant = float(line[9:])
            elif line.startswith("h "):
                _, i, v = line.split()
                entries.append(("h", int(i), 0, float(v), lineno))
            elif line.startswith("J "):
                _, i, j, v = line.split()
                entries.append(("J", int(i), int(j), float(v), lineno))
            else:
                raise ValueError("unrecognized entry")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: cannot parse {line!r}: {exc}")
    if n is None or n < 1:
        raise ValueError("model text must declare n")
    h = np.zeros(n)
    J = np.zeros((n, n))
    for kind, i, j, v, lineno in entries:
        if kind == "h":
            if not 0 <= i < n:
                raise ValueError(f"line {lineno}: field index {i} out of range")
            h[i] = v
        else:
            if not 0 <= i < j < n:
                raise ValueError(
                    f"line {lineno}: coupling ({i},{j}) must satisfy i < j < n"
                )
            J[i, j] = v
    return IsingModel(h, J, constant)
