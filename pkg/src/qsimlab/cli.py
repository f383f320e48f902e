"""Deterministic command-line front door.

One subcommand per experiment; flat key=value config files with flag
overrides; CSV output with a '#'-prefixed metadata header that echoes
the full configuration (17 significant digits, round-trip exact).
Exit codes: 0 ok, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, algorithms, ising, mitigation, noise
from .config import (
    SCHEMAS,
    ConfigError,
    ExperimentConfig,
    build_config,
    config_to_metadata,
    parse_config_text,
)
from .core import fidelity, random_state
from .mitigation import BathSpec, PulseSequence
from .qec import (
    StabilizerGroup,
    correlated_pfail,
    partition_by_stabilizers,
    pfail_concatenated,
    pfail_repetition,
    sample_repetition_failure,
)

# reference bath used when `dd` gets no bath file
DEFAULT_BATH_MODES = ((0.08, 1.0), (0.10, 1.7), (0.12, 2.3))
DEFAULT_BATH_BETA = 2.0


# ---------------------------------------------------------------------------
# result tables


@dataclass(frozen=True)
class ResultTable:
    """Homogeneous rows under named columns, with an echoing header."""

    columns: tuple
    rows: tuple
    metadata: tuple = ()

    def __post_init__(self):
        columns = tuple(str(c) for c in self.columns)
        rows = tuple(tuple(r) for r in self.rows)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(
                    f"row width {len(row)} != column count {len(columns)}"
                )
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "metadata", tuple(
            (str(k), str(v)) for k, v in self.metadata
        ))


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def table_to_csv(table: ResultTable) -> str:
    lines = [f"# {key}={val}" for key, val in table.metadata]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def table_from_csv(text: str) -> ResultTable:
    """Parse a table back; cells come back as strings."""
    metadata = []
    columns = None
    rows = []
    for raw in text.splitlines():
        if raw.startswith("#"):
            key, _, val = raw[1:].strip().partition("=")
            metadata.append((key, val))
        elif columns is None:
            columns = tuple(raw.split(","))
        elif raw:
            rows.append(tuple(raw.split(",")))
    if columns is None:
        raise ValueError("no header line found")
    return ResultTable(columns, tuple(rows), tuple(metadata))


# ---------------------------------------------------------------------------
# subcommand runners: params in, (columns, rows, extra metadata) out


def _run_qpe(cfg: ExperimentConfig):
    p = cfg.params
    phi, bits = p["phi"], p["bits"]
    if not 0.0 <= phi < 1.0:
        raise ValueError(f"phi must lie in [0, 1): {phi}")
    u = np.diag([1.0, np.exp(2j * np.pi * phi)]).astype(complex)
    psi = np.array([0.0, 1.0], dtype=complex)
    if p["method"] == "register":
        dist = algorithms.qpe_register_distribution(u, psi, bits)
        rows = [(k, k / (1 << bits), float(pr)) for k, pr in enumerate(dist)]
        estimate = int(np.argmax(dist)) / (1 << bits)
        return (
            ("k", "phi_k", "probability"),
            rows,
            (("estimate", format(estimate, ".17g")),),
        )
    est = algorithms.qpe_kitaev(
        u, psi, bits, shots_per_bit=p["shots"],
        rng=np.random.default_rng(cfg.seed),
    )
    rows = [(j, bit) for j, bit in enumerate(est.bits)]
    return (
        ("bit_index", "bit"),
        rows,
        (("estimate", format(est.phi_hat, ".17g")),),
    )


def _run_hhl(cfg: ExperimentConfig):
    p = cfg.params
    flat = np.asarray(p["a"], dtype=float)
    n = math.isqrt(flat.size)
    if n * n != flat.size:
        raise ValueError("a must be a square matrix, row-major")
    a = flat.reshape(n, n)
    b = np.asarray(p["b"], dtype=float)
    system = algorithms.LinearSystem(a, b)
    x_hat, p_success = algorithms.hhl(system, p["d"], p["c"], rng=cfg.seed)
    x_classical = np.linalg.solve(a, b)
    x_classical = x_classical / np.linalg.norm(x_classical)
    if np.real(np.vdot(x_classical, x_hat)) < 0:
        x_hat = -x_hat
    rows = [
        (i, float(x_classical[i]), float(np.real(x_hat[i])),
         float(np.imag(x_hat[i])))
        for i in range(n)
    ]
    return (
        ("index", "x_classical", "x_hhl_re", "x_hhl_im"),
        rows,
        (
            ("p_success", format(p_success, ".17g")),
            ("fidelity", format(fidelity(x_classical, x_hat), ".17g")),
        ),
    )


def _run_teleport(cfg: ExperimentConfig):
    psi = random_state(1, np.random.default_rng(cfg.seed))
    probs = algorithms.teleport_branch_probabilities(psi)
    rows = []
    for m1 in (0, 1):
        for m2 in (0, 1):
            out = algorithms.teleport(psi, force=(m1, m2))
            rows.append((m1, m2, float(probs[2 * m1 + m2]), fidelity(out, psi)))
    return ("m1", "m2", "probability", "fidelity"), rows, ()


def _run_densecode(cfg: ExperimentConfig):
    rows = []
    for x in (0, 1):
        for y in (0, 1):
            decoded = algorithms.dense_coding(x, y)
            rows.append((x, y, decoded[0], decoded[1]))
    return ("x", "y", "decoded_x", "decoded_y"), rows, ()


def _run_ising_encode(cfg: ExperimentConfig):
    p = cfg.params
    if p["task"] == "subset-sum":
        model = ising.subset_sum_to_ising(p["m"], p["values"])
    else:
        model = ising.partition_to_ising(p["values"])
    energy, states = ising.brute_force_ground(model)
    rows = [("h", i, -1, float(hi)) for i, hi in enumerate(model.h)]
    for i in range(model.n):
        for j in range(i + 1, model.n):
            if model.J[i, j] != 0.0:
                rows.append(("J", i, j, float(model.J[i, j])))
    rows.append(("constant", -1, -1, float(model.constant)))
    ground = ";".join("".join(str(b) for b in bits) for bits in states)
    return (
        ("kind", "i", "j", "value"),
        rows,
        (
            ("n", str(model.n)),
            ("ground_energy", format(energy, ".17g")),
            ("ground_states", ground),
        ),
    )


def _pair_model(params) -> ising.IsingModel:
    h = np.asarray(params["h"], dtype=float)
    n = h.size
    upper = np.asarray(params["j"], dtype=float)
    if upper.size != n * (n - 1) // 2:
        raise ValueError(
            f"j needs {n * (n - 1) // 2} upper-triangular entries, got {upper.size}"
        )
    j = np.zeros((n, n))
    j[np.triu_indices(n, k=1)] = upper
    return ising.IsingModel(h, j)


def _run_anneal(cfg: ExperimentConfig):
    model = _pair_model(cfg.params)
    energy, _ = ising.brute_force_ground(model)
    rows = []
    for tau in cfg.params["taus"]:
        result = ising.anneal(model, ising.linear_schedule(tau))
        rows.append((float(tau), result.p_success, result.min_gap))
    return (
        ("tau", "p_success", "min_gap"),
        rows,
        (("ground_energy", format(energy, ".17g")),),
    )


def _run_qaoa(cfg: ExperimentConfig):
    p = cfg.params
    model = _pair_model(p)
    energy, _ = ising.brute_force_ground(model)
    best, best_e, trace = ising.qaoa_optimize(
        model, p["p"], p["budget"], np.random.default_rng(cfg.seed)
    )
    rows = [(i, float(e)) for i, e in enumerate(trace)]
    return (
        ("eval", "best_energy"),
        rows,
        (
            ("ground_energy", format(energy, ".17g")),
            ("best_energy", format(best_e, ".17g")),
            ("gamma", ",".join(format(g, ".17g") for g in best.gamma)),
            ("beta", ",".join(format(b, ".17g") for b in best.beta)),
        ),
    )


def _run_noise_sweep(cfg: ExperimentConfig):
    p = cfg.params
    curve = noise.z_curve_full(
        p["eps"],
        p["pE"],
        noise.MeasurementErrorModel(p["mu"], p["nu"]),
        noise.SamplingPlan(n_shots=p["N"]),
        p["dmax"],
        rng=np.random.default_rng(cfg.seed),
    )
    rows = [
        (int(d), float(ze), float(zs), float(zb))
        for d, ze, zs, zb in zip(
            curve.depth, curve.z_exact, curve.z_sampled, curve.z_biased
        )
    ]
    return ("depth", "z_exact", "z_sampled", "z_biased"), rows, ()


def _run_qec_bench(cfg: ExperimentConfig):
    p = cfg.params
    k = p["k"]
    gen = np.random.default_rng(cfg.seed)
    rows = []
    # phase-flip repetition fails by the same majority law in the
    # conjugated basis, so both codes share the analytic column
    for eps in p["eps"]:
        analytic = pfail_repetition(k, float(eps))
        sampled = sample_repetition_failure(k, float(eps), p["trials"], gen)
        rows.append((float(eps), float(analytic), float(sampled)))
    return (
        ("eps", "p_fail_analytic", "p_fail_sampled"),
        rows,
        (("code", p["code"]), ("k", str(k))),
    )


def _run_qec_stabilizers(cfg: ExperimentConfig):
    words = [w for w in cfg.params["generators"].split(";") if w]
    group = StabilizerGroup(words)
    sectors = partition_by_stabilizers(group)
    rows = [
        ("".join(str(b) for b in bits), sectors[bits].shape[1])
        for bits in sorted(sectors)
    ]
    return (
        ("sector", "dimension"),
        rows,
        (
            ("n_qubits", str(group.n)),
            ("n_generators", str(len(group.generators))),
        ),
    )


def _zne_channel(model: str, p: float):
    if model == "bitflip":
        return noise.bit_flip_channel(p)
    return noise.pauli_channel((1 - 3 * p / 4, p / 4, p / 4, p / 4))


def _run_zne(cfg: ExperimentConfig):
    p = cfg.params
    channel = _zne_channel(p["model"], p["p"])
    shots = p["shots"] if p["shots"] > 0 else None
    gen = np.random.default_rng(cfg.seed)
    scales = tuple(int(c) for c in p["scales"])
    estimates = tuple(
        mitigation.noise_scaled_execution(p["depth"], channel, c, shots, gen)
        for c in scales
    )
    series = mitigation.EstimatorSeries(
        tuple(float(c) for c in scales),
        estimates,
        n_sample=shots or 1,
        sigma0=1.0 if shots else 0.0,  # per-shot variance of a +-1 outcome <= 1
    )
    extra = [("ideal", format(math.cos(p["depth"] * math.pi), ".17g"))]
    if len(scales) >= 2:
        intercept, var = mitigation.zne_linear(series)
        extra.append(("linear_intercept", format(intercept, ".17g")))
        extra.append(("linear_variance_bound", format(var, ".17g")))
    extra.append(
        ("richardson", format(mitigation.zne_richardson(series), ".17g"))
    )
    rows = [(c, float(e)) for c, e in zip(scales, estimates)]
    return ("scale", "estimate"), rows, tuple(extra)


def _run_pec(cfg: ExperimentConfig):
    p = cfg.params
    lam = tuple(float(v) for v in p["lambdas"])
    quasi = mitigation.pec_invert_pauli(lam)
    gen = np.random.default_rng(cfg.seed)
    est, err = mitigation.pec_mitigate(p["depth"], lam, p["shots"], gen)
    raw = mitigation.noise_scaled_execution(
        p["depth"], noise.pauli_channel(lam), 1, p["shots"], gen
    )
    raw_err = math.sqrt(max(1.0 - raw**2, 0.0) / p["shots"])
    rows = [
        ("mitigated", float(est), float(err)),
        ("unmitigated", float(raw), float(raw_err)),
    ]
    return (
        ("method", "estimate", "stderr"),
        rows,
        (
            ("gamma", format(quasi.gamma, ".17g")),
            ("gamma_total", format(quasi.gamma ** p["depth"], ".17g")),
            ("ideal", format(math.cos(p["depth"] * math.pi), ".17g")),
        ),
    )


def parse_bath_text(text: str) -> BathSpec:
    """Bath file format: one `beta=<x>` line plus `mode <g> <omega>` lines."""
    beta = None
    modes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("beta="):
            beta = float(line[5:])
        elif line.startswith("mode "):
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected `mode g omega`")
            modes.append((float(parts[1]), float(parts[2])))
        else:
            raise ValueError(f"line {lineno}: unrecognized entry {line!r}")
    if beta is None:
        raise ValueError("bath file must set beta=")
    return BathSpec(tuple(modes), beta)


def _run_dd(cfg: ExperimentConfig):
    p = cfg.params
    if p["bath"]:
        bath = parse_bath_text(Path(p["bath"]).read_text())
    else:
        bath = BathSpec(DEFAULT_BATH_MODES, DEFAULT_BATH_BETA)
    total = p["total"]
    free_total = mitigation.gamma_free(bath, 0.0, total)
    rows = []
    for dt in p["dts"]:
        dt = float(dt)
        n_cycles = max(int(round(total / (2 * dt))), 1)
        duration = 2 * n_cycles * dt
        pulsed = mitigation.gamma_pulsed(bath, PulseSequence(0.0, dt, n_cycles))
        free = mitigation.gamma_free(bath, 0.0, duration)
        ratio = pulsed / free if free > 0 else 0.0
        rows.append((dt, n_cycles, float(pulsed), float(ratio)))
    return (
        ("dt", "n_cycles", "gamma_pulsed", "ratio_to_free"),
        rows,
        (
            ("gamma_free", format(free_total, ".17g")),
            ("beta", format(bath.beta, ".17g")),
            ("n_modes", str(len(bath.modes))),
            ("total", format(total, ".17g")),
        ),
    )


RUNNERS = {
    "qpe": _run_qpe,
    "hhl": _run_hhl,
    "teleport": _run_teleport,
    "densecode": _run_densecode,
    "ising encode": _run_ising_encode,
    "anneal": _run_anneal,
    "qaoa": _run_qaoa,
    "noise-sweep": _run_noise_sweep,
    "qec bench": _run_qec_bench,
    "qec stabilizers": _run_qec_stabilizers,
    "zne": _run_zne,
    "pec": _run_pec,
    "dd": _run_dd,
}


def run(config: ExperimentConfig) -> ResultTable:
    """Execute one experiment; deterministic for a fixed (config, seed)."""
    if config.subcommand not in RUNNERS:
        raise ValueError(f"{config.subcommand}: no runner")
    columns, rows, extra = RUNNERS[config.subcommand](config)
    metadata = config_to_metadata(config, __version__) + tuple(extra)
    return ResultTable(columns, tuple(rows), metadata)


# ---------------------------------------------------------------------------
# the reproduce-all driver


def _table_config(subcommand: str, seed: int, **overrides) -> ExperimentConfig:
    flags = {key: val for key, val in overrides.items()}
    flags["seed"] = seed
    return build_config(subcommand, flag_values=flags, env={})


def _analytic_table(name: str, seed: int, columns, rows, extra=()) -> ResultTable:
    metadata = (
        ("version", __version__),
        ("subcommand", "reproduce-all"),
        ("table", name),
        ("seed", str(seed)),
    ) + tuple(extra)
    return ResultTable(columns, tuple(rows), metadata)


def _build_z_noiseless(seed):
    z = noise.z_curve_noiseless(80)
    return _analytic_table(
        "z_noiseless", seed, ("depth", "z"),
        [(d, float(v)) for d, v in enumerate(z)],
    )


def _build_z_miscalibrated(seed):
    z = noise.z_curve_miscalibrated(0.1, 80)
    return _analytic_table(
        "z_miscalibrated", seed, ("depth", "z"),
        [(d, float(v)) for d, v in enumerate(z)],
        extra=(("eps", "0.1"),),
    )


def _build_z_sampled(seed):
    shots = 200
    z = noise.z_curve_miscalibrated(0.1, 80)
    p_one = (1.0 - z) / 2.0
    gen = np.random.default_rng(seed)
    counts = gen.binomial(shots, p_one)
    z_sampled = 1.0 - 2.0 * counts / shots
    rows = [
        (d, float(ze), float(zs)) for d, (ze, zs) in enumerate(zip(z, z_sampled))
    ]
    return _analytic_table(
        "z_sampled", seed, ("depth", "z_exact", "z_sampled"), rows,
        extra=(("eps", "0.1"), ("shots", str(shots))),
    )


def _build_z_measurement(seed):
    mu, nu = 0.03, 0.07
    z = noise.z_curve_miscalibrated(0.1, 80)
    p_one = (1.0 - z) / 2.0
    p_tilde = p_one + mu - (nu + mu) * p_one
    rows = [
        (d, float(zt), float(1.0 - 2.0 * pb))
        for d, (zt, pb) in enumerate(zip(z, p_tilde))
    ]
    return _analytic_table(
        "z_measurement", seed, ("depth", "z", "z_biased"), rows,
        extra=(("eps", "0.1"), ("mu", "0.03"), ("nu", "0.07")),
    )


def _build_z_environment(seed):
    z = noise.z_curve_environment(0.007, 80)
    return _analytic_table(
        "z_environment", seed, ("depth", "z"),
        [(d, float(v)) for d, v in enumerate(z)],
        extra=(("pE", "0.007"),),
    )


def _build_z_combined(seed):
    return run(_table_config("noise-sweep", seed))


def _build_binomial_histogram(seed):
    n_shots, p_one, reps = 30, 0.3, 5000
    gen = np.random.default_rng(seed)
    counts = np.bincount(gen.binomial(n_shots, p_one, size=reps),
                         minlength=n_shots + 1)
    rows = []
    for k in range(n_shots + 1):
        pmf = math.comb(n_shots, k) * p_one**k * (1 - p_one) ** (n_shots - k)
        rows.append((k, float(counts[k] / reps), float(pmf)))
    return _analytic_table(
        "binomial_histogram", seed, ("k", "frequency", "pmf"), rows,
        extra=(("n_shots", str(n_shots)), ("p", "0.3"), ("reps", str(reps))),
    )


def _build_pfail_repetition(seed):
    rows = []
    for k in (1, 3, 5, 7, 9):
        for eps in np.linspace(0.0, 0.5, 21):
            rows.append((k, float(eps), float(pfail_repetition(k, float(eps)))))
    return _analytic_table(
        "pfail_repetition", seed, ("k", "eps", "p_fail"), rows
    )


def _build_pfail_concatenated(seed):
    rows = []
    for level in range(4):
        for eps in np.linspace(0.05, 0.45, 9):
            r = pfail_concatenated(level, float(eps))
            rows.append((level, float(eps), float(r.exact), float(r.approximant)))
    return _analytic_table(
        "pfail_concatenated", seed,
        ("level", "eps", "p_fail_exact", "p_fail_approx"), rows,
    )


def _build_pfail_correlated(seed):
    p = 0.01
    rows = []
    for n in (3, 5, 7):
        r = correlated_pfail(n, p)
        rows.append((n, r.order, r.count, float(r.leading), float(r.truncated)))
    return _analytic_table(
        "pfail_correlated", seed,
        ("n", "order", "count", "leading", "truncated"), rows,
        extra=(("p", format(p, ".17g")),),
    )


def _build_qaoa_trace(seed):
    return run(_table_config("qaoa", seed))


def _build_zne_points(seed):
    return run(_table_config("zne", seed))


def _build_pec_estimates(seed):
    return run(_table_config("pec", seed))


def _build_dd_gamma(seed):
    return run(_table_config("dd", seed))


TABLE_BUILDERS = (
    ("01_z_noiseless", _build_z_noiseless),
    ("02_z_miscalibrated", _build_z_miscalibrated),
    ("03_z_sampled", _build_z_sampled),
    ("04_z_measurement", _build_z_measurement),
    ("05_z_environment", _build_z_environment),
    ("06_z_combined", _build_z_combined),
    ("07_binomial_histogram", _build_binomial_histogram),
    ("08_pfail_repetition", _build_pfail_repetition),
    ("09_pfail_concatenated", _build_pfail_concatenated),
    ("10_pfail_correlated", _build_pfail_correlated),
    ("11_qaoa_trace", _build_qaoa_trace),
    ("12_zne_points", _build_zne_points),
    ("13_pec_estimates", _build_pec_estimates),
    ("14_dd_gamma", _build_dd_gamma),
)


def reproduce_all(seed: int, outdir) -> tuple:
    """Write every figure table; returns (written paths, failures)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    failures = []
    for name, builder in TABLE_BUILDERS:
        try:
            table = builder(seed)
            path = outdir / f"{name}.csv"
            path.write_text(table_to_csv(table))
            written.append((name, path, len(table.rows)))
        except Exception as exc:  # noqa: BLE001 - collected and reported
            failures.append((name, str(exc)))
    return written, failures


# ---------------------------------------------------------------------------
# argument parsing and entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsimlab",
        description="Quantum-simulation experiments with CSV output.",
    )
    parser.add_argument(
        "--version", action="version", version=f"qsimlab {__version__}"
    )
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    groups = {}
    for command_id, schema in SCHEMAS.items():
        parts = command_id.split()
        if len(parts) == 1:
            leaf = sub.add_parser(parts[0], help=f"run the {parts[0]} experiment")
        else:
            head, tail = parts
            if head not in groups:
                group_parser = sub.add_parser(head, help=f"{head} experiments")
                groups[head] = group_parser.add_subparsers(
                    dest=f"{head}_action", metavar="action"
                )
            leaf = groups[head].add_parser(tail)
        leaf.set_defaults(command_id=command_id)
        leaf.add_argument("--config", help="flat key=value config file")
        leaf.add_argument("--seed", help="RNG seed (overrides file and env)")
        leaf.add_argument("--out", help="output CSV path (default: stdout)")
        for key, prm in schema.items():
            default_text = prm.help
            if prm.choices:
                default_text += f" (one of {', '.join(prm.choices)})"
            leaf.add_argument(f"--{key}", dest=f"param_{key}", help=default_text)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if exc.code is not None else 0
        return int(code) if isinstance(code, int) else 2
    command = getattr(args, "command_id", None)
    if command is None:
        parser.print_usage(sys.stderr)
        return 2

    try:
        file_values = {}
        if args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise ConfigError(f"{command}.config: cannot read: {exc}")
            file_values = parse_config_text(text)
        flag_values = {"seed": args.seed, "out": args.out}
        for key in SCHEMAS[command]:
            flag_values[key] = getattr(args, f"param_{key}")
        config = build_config(command, file_values, flag_values)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if command == "reproduce-all":
            written, failures = reproduce_all(
                config.seed, config.params["outdir"]
            )
            for name, path, n_rows in written:
                print(f"wrote {path} ({n_rows} rows)")
            if failures:
                for name, msg in failures:
                    print(f"failed: {name}: {msg}", file=sys.stderr)
                return 3
            return 0
        table = run(config)
    except Exception as exc:  # noqa: BLE001 - reported with context
        print(f"error: {command}: {exc}", file=sys.stderr)
        return 3

    csv_text = table_to_csv(table)
    if config.out:
        Path(config.out).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
