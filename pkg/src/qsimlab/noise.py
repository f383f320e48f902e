"""Single-qubit noise sources for the repeated-X polarization benchmark.

Four error mechanisms are modeled: systematic over-rotation of the X gate,
finite-shot projection noise, biased readout, and a probabilistic
environment channel. Each is available alone, and z_curve_full composes
them into the standard pipeline

    |0> -> ( E  X  Rx(eps) )^d -> sampling -> readout bias.

Depth series always include d = 0 and report the polarization <Z>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    I2,
    X,
    Y,
    Z,
    KrausChannel,
    apply_kraus,
    as_generator,
    density,
    expectation_pauli,
    rx,
)

_PAULI_OPS = (I2, X, Y, Z)


# ---------------------------------------------------------------------------
# error models


@dataclass(frozen=True)
class MiscalibrationModel:
    """Every X gate over-rotates by ``epsilon`` radians about the x axis."""

    epsilon: float

    def __post_init__(self):
        if not np.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")

    def gate(self) -> np.ndarray:
        # X Rx(eps) equals i Rx(pi + eps) up to the stated global phase
        return X @ rx(self.epsilon)


@dataclass(frozen=True)
class MeasurementErrorModel:
    """Readout flips: mu = P(read 1 | true 0), nu = P(read 0 | true 1)."""

    mu: float
    nu: float

    def __post_init__(self):
        if not (0 <= self.mu <= 1 and 0 <= self.nu <= 1):
            raise ValueError("mu and nu must lie in [0, 1]")

    def assignment_matrix(self) -> np.ndarray:
        """Column-stochastic map from true to observed outcome frequencies."""
        return np.array([[1 - self.mu, self.nu], [self.mu, 1 - self.nu]])


@dataclass(frozen=True, eq=False)
class EnvironmentChannel:
    """An extra gate (default X) fires before each circuit gate w.p. p_e."""

    p_e: float
    error_gate: np.ndarray = field(default_factory=lambda: X.copy())

    def __post_init__(self):
        if not 0 <= self.p_e <= 1:
            raise ValueError("p_e must lie in [0, 1]")
        g = np.asarray(self.error_gate, dtype=complex)
        if g.shape != (2, 2):
            raise ValueError("error_gate must be a single-qubit matrix")
        object.__setattr__(self, "error_gate", g)

    def kraus(self) -> KrausChannel:
        return KrausChannel(
            [np.sqrt(1 - self.p_e) * I2, np.sqrt(self.p_e) * self.error_gate]
        )


@dataclass(frozen=True)
class SamplingPlan:
    """Finite measurement statistics: N shots drawn from a fixed seed."""

    n_shots: int
    seed: int | None = None

    def __post_init__(self):
        if self.n_shots < 1:
            raise ValueError("n_shots must be at least 1")


# ---------------------------------------------------------------------------
# polarization curves


def _depth_guard(d_max: int) -> int:
    d_max = int(d_max)
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    return d_max


def _state_curve(gate: np.ndarray, d_max: int) -> np.ndarray:
    psi = np.array([1.0, 0.0], dtype=complex)
    out = np.empty(d_max + 1)
    for d in range(d_max + 1):
        out[d] = (abs(psi[0]) ** 2 - abs(psi[1]) ** 2).real
        psi = gate @ psi
    return out


def z_curve_noiseless(d_max: int) -> np.ndarray:
    """<Z> of X^d|0>: exact +-1 alternation cos(d pi)."""
    return _state_curve(X, _depth_guard(d_max))


def z_curve_miscalibrated(eps: float, d_max: int) -> np.ndarray:
    """<Z> when each X over-rotates by eps; follows cos(d (pi + eps)).

    The deviation from noiseless grows like d^2 eps^2 / 2 at small depth
    and inverts the signal entirely once d*eps nears an odd multiple of pi.
    """
    return _state_curve(MiscalibrationModel(eps).gate(), _depth_guard(d_max))


def z_curve_environment(
    p_e: float, d_max: int, error_gate=None, eps: float = 0.0
) -> np.ndarray:
    """Exact density-matrix pipeline: channel then (mis)calibrated X, d times.

    With the default X error and eps = 0 the series is (2 p_e - 1)^d; a
    nonzero eps yields the damped inverting curve (1-2p_e)^d cos(d(pi+eps)).
    """
    d_max = _depth_guard(d_max)
    channel = EnvironmentChannel(p_e, X if error_gate is None else error_gate)
    ch = channel.kraus()
    gate = MiscalibrationModel(eps).gate()
    rho = density(np.array([1.0, 0.0], dtype=complex))
    out = np.empty(d_max + 1)
    for d in range(d_max + 1):
        out[d] = expectation_pauli(rho, "Z")
        rho = gate @ apply_kraus(rho, ch) @ gate.conj().T
    return out


def z_curve_environment_sampled(
    p_e: float, d_max: int, shots: int, rng, eps: float = 0.0, error_gate=None
) -> np.ndarray:
    """Stochastic-trajectory version of z_curve_environment.

    Each shot inserts the error gate independently per depth; the returned
    series is the trajectory average of the exact per-shot <Z>, which
    converges to the deterministic channel curve.
    """
    d_max = _depth_guard(d_max)
    if shots < 1:
        raise ValueError("shots must be at least 1")
    channel = EnvironmentChannel(p_e, X if error_gate is None else error_gate)
    gate = MiscalibrationModel(eps).gate()
    gen = as_generator(rng)
    states = np.zeros((shots, 2), dtype=complex)
    states[:, 0] = 1.0
    out = np.empty(d_max + 1)
    for d in range(d_max + 1):
        out[d] = np.mean(np.abs(states[:, 0]) ** 2 - np.abs(states[:, 1]) ** 2)
        hit = gen.random(shots) < p_e
        states[hit] = states[hit] @ channel.error_gate.T
        states = states @ gate.T
    return out


def combined_state(eps: float, p_e: float, d: int) -> np.ndarray:
    """Two-branch mixture after depth d: no error anywhere vs error always.

    rho = (1-p_e)|psi_A><psi_A| + p_e|psi_B><psi_B| with psi_A the clean
    miscalibrated evolution and psi_B the evolution with the X error firing
    before every gate.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    if not 0 <= p_e <= 1:
        raise ValueError("p_e must lie in [0, 1]")
    gate = MiscalibrationModel(eps).gate()
    psi_a = np.array([1.0, 0.0], dtype=complex)
    psi_b = psi_a.copy()
    for _ in range(d):
        psi_a = gate @ psi_a
        psi_b = gate @ (X @ psi_b)
    return (1 - p_e) * density(psi_a) + p_e * density(psi_b)


def _plan_generator(plan: SamplingPlan, rng) -> np.random.Generator:
    if plan.seed is not None:
        return as_generator(plan.seed)
    if rng is None:
        raise ValueError("sampling requires plan.seed or an rng")
    return as_generator(rng)


def sample_polarization(p_d: float, plan: SamplingPlan, rng=None) -> float:
    """Sampling mean S = (#ones)/N over N Bernoulli(p_d) shots."""
    if not 0 <= p_d <= 1:
        raise ValueError("p_d must lie in [0, 1]")
    gen = _plan_generator(plan, rng)
    return float(np.count_nonzero(gen.random(plan.n_shots) < p_d)) / plan.n_shots


def apply_measurement_bias(p: float, model: MeasurementErrorModel) -> float:
    """Observed frequency p~ = p + mu - (nu + mu) p."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return p + model.mu - (model.nu + model.mu) * p


def invert_measurement_bias(p_tilde: float, model: MeasurementErrorModel) -> float:
    """Recover p from p~ = mu + (1 - mu - nu) p; needs mu + nu != 1."""
    denom = 1 - model.mu - model.nu
    if abs(denom) < 1e-12:
        raise ValueError("bias map is not invertible when mu + nu = 1")
    return (p_tilde - model.mu) / denom


def calibrate_measurement(
    shots: int, true_mu: float, true_nu: float, rng
) -> MeasurementErrorModel:
    """Estimate readout flips from the two trivial circuits.

    Preparing |0> and reading ones estimates mu; preparing |1> and reading
    zeros estimates nu. Standard errors follow binomial counting.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    truth = MeasurementErrorModel(true_mu, true_nu)
    gen = as_generator(rng)
    mu_hat = np.count_nonzero(gen.random(shots) < truth.mu) / shots
    nu_hat = np.count_nonzero(gen.random(shots) < truth.nu) / shots
    return MeasurementErrorModel(float(mu_hat), float(nu_hat))


@dataclass(frozen=True)
class FullNoiseCurve:
    """Per-depth tracks of the composed pipeline."""

    depth: np.ndarray
    z_exact: np.ndarray
    p_one: np.ndarray
    z_sampled: np.ndarray
    z_biased: np.ndarray


def z_curve_full(
    eps: float,
    p_e: float,
    model: MeasurementErrorModel,
    plan: SamplingPlan,
    d_max: int,
    rng=None,
) -> FullNoiseCurve:
    """Compose miscalibration, environment, sampling, and readout bias.

    The exact track is the two-branch mixture polarization
    (1-p_e) cos(d(pi+eps)) + p_e cos(d eps); its |1> population p_d feeds a
    binomial sampler of plan.n_shots shots, and the sampled means S pass
    through S -> S + mu - (nu + mu) S. Polarizations are 1 - 2 S.
    """
    d_max = _depth_guard(d_max)
    if not 0 <= p_e <= 1:
        raise ValueError("p_e must lie in [0, 1]")
    gate = MiscalibrationModel(eps).gate()
    gen = _plan_generator(plan, rng)

    psi_a = np.array([1.0, 0.0], dtype=complex)
    psi_b = psi_a.copy()
    z_exact = np.empty(d_max + 1)
    p_one = np.empty(d_max + 1)
    sampled = np.empty(d_max + 1)
    for d in range(d_max + 1):
        pa = abs(psi_a[1]) ** 2
        pb = abs(psi_b[1]) ** 2
        p_d = (1 - p_e) * pa + p_e * pb
        p_one[d] = p_d
        z_exact[d] = 1 - 2 * p_d
        sampled[d] = np.count_nonzero(gen.random(plan.n_shots) < p_d) / plan.n_shots
        psi_a = gate @ psi_a
        psi_b = gate @ (X @ psi_b)
    biased = sampled + model.mu - (model.nu + model.mu) * sampled
    return FullNoiseCurve(
        depth=np.arange(d_max + 1),
        z_exact=z_exact,
        p_one=p_one,
        z_sampled=1 - 2 * sampled,
        z_biased=1 - 2 * biased,
    )


# ---------------------------------------------------------------------------
# Pauli channels


def pauli_channel(lambdas) -> KrausChannel:
    """Lambda(rho) = sum_a lambda_a sigma_a rho sigma_a as a Kraus channel."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (4,):
        raise ValueError("need exactly four weights (identity, X, Y, Z)")
    if np.any(lam < 0):
        raise ValueError("weights must be non-negative")
    if abs(lam.sum() - 1) > 1e-12:
        raise ValueError("weights must sum to one")
    ops = [np.sqrt(l) * sigma for l, sigma in zip(lam, _PAULI_OPS) if l > 0]
    return KrausChannel(ops)


def bit_flip_channel(p: float) -> KrausChannel:
    """rho -> (1-p) rho + p X rho X."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return pauli_channel([1 - p, p, 0.0, 0.0])
