"""Command-line harness: config handling, CSV format, determinism."""

import math

import numpy as np
import pytest

from qsimlab import cli, config, ising
from qsimlab.cli import (
    ResultTable,
    parse_bath_text,
    reproduce_all,
    run,
    table_from_csv,
    table_to_csv,
)
from qsimlab.config import (
    ConfigError,
    ExperimentConfig,
    build_config,
    config_from_metadata,
    parse_config_text,
    parse_value,
)


# ---------------------------------------------------------------------------
# result tables and CSV round trips


class TestResultTable:
    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError, match="row width"):
            ResultTable(("a", "b"), ((1, 2), (3,)))

    def test_csv_layout(self):
        table = ResultTable(
            ("x", "y"), ((1, 0.5), (2, 0.25)), (("seed", "7"),)
        )
        text = table_to_csv(table)
        lines = text.splitlines()
        assert lines[0] == "# seed=7"
        assert lines[1] == "x,y"
        assert lines[2] == "1,0.5"
        assert text.endswith("\n")

    def test_float_cells_survive_round_trip_exactly(self):
        # 17 significant digits reproduce any double exactly
        gen = np.random.default_rng(3)
        values = tuple(gen.standard_normal(40) * 10.0 ** gen.integers(-8, 8, 40))
        table = ResultTable(("v",), tuple((float(v),) for v in values))
        back = table_from_csv(table_to_csv(table))
        for (cell,), v in zip(back.rows, values):
            assert float(cell) == v

    def test_metadata_round_trip(self):
        table = ResultTable(
            ("a",), ((1,),), (("seed", "7"), ("note", "x=y")),
        )
        back = table_from_csv(table_to_csv(table))
        assert back.metadata == (("seed", "7"), ("note", "x=y"))
        assert back.columns == ("a",)

    def test_headerless_text_rejected(self):
        with pytest.raises(ValueError, match="header"):
            table_from_csv("# only=metadata\n")


# ---------------------------------------------------------------------------
# configuration


class TestConfigParsing:
    def test_scalar_kinds(self):
        assert parse_value("int", "12", "k") == 12
        assert parse_value("float", "0.5", "k") == 0.5
        assert parse_value("str", "abc", "k") == "abc"
        assert parse_value("int_list", "1,2,3", "k") == (1, 2, 3)
        assert parse_value("float_list", "0.5,1.5", "k") == (0.5, 1.5)

    def test_bad_value_reports_key_path(self):
        with pytest.raises(ConfigError, match="qpe.bits"):
            build_config("qpe", flag_values={"bits": "three"}, env={})

    def test_config_text_lines(self):
        values = parse_config_text("# note\nphi = 0.25\n\nbits=4\n")
        assert values == {"phi": "0.25", "bits": "4"}

    def test_config_text_bad_line_numbered(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_text("a=1\nnonsense\n")

    def test_defaults_applied(self):
        cfg = build_config("qpe", env={})
        assert cfg.subcommand == "qpe"
        assert cfg.params["phi"] == 0.640625
        assert cfg.params["bits"] == 3
        assert cfg.seed == config.DEFAULT_SEED

    def test_precedence_flags_over_file_over_env(self):
        env = {config.SEED_ENV_VAR: "99"}
        cfg = build_config("qpe", env=env)
        assert cfg.seed == 99
        cfg = build_config("qpe", file_values={"seed": "11"}, env=env)
        assert cfg.seed == 11
        cfg = build_config(
            "qpe", file_values={"seed": "11"}, flag_values={"seed": "5"},
            env=env,
        )
        assert cfg.seed == 5

    def test_param_precedence(self):
        cfg = build_config(
            "qpe", file_values={"phi": "0.25"}, flag_values={"phi": "0.75"},
            env={},
        )
        assert cfg.params["phi"] == 0.75

    def test_unknown_key_rejected_with_path(self):
        with pytest.raises(ConfigError, match="qpe.rogue"):
            build_config("qpe", file_values={"rogue": "1"}, env={})

    def test_choices_enforced(self):
        with pytest.raises(ConfigError, match="qpe.method"):
            build_config("qpe", flag_values={"method": "guess"}, env={})

    def test_unknown_subcommand(self):
        with pytest.raises(ConfigError, match="nope"):
            build_config("nope", env={})

    def test_none_flags_mean_unset(self):
        cfg = build_config("qpe", flag_values={"phi": None, "seed": None},
                           env={})
        assert cfg.params["phi"] == 0.640625

    def test_metadata_round_trip(self):
        original = build_config(
            "zne", flag_values={"scales": "1,3,5", "shots": "0", "seed": "13"},
            env={},
        )
        pairs = config.config_to_metadata(original, "0.1.0")
        rebuilt = config_from_metadata(pairs)
        assert rebuilt.subcommand == original.subcommand
        assert rebuilt.seed == original.seed
        assert rebuilt.params == original.params

    def test_metadata_round_trip_ignores_runner_keys(self):
        cfg = build_config("qpe", env={})
        table = run(cfg)
        rebuilt = config_from_metadata(table.metadata)
        assert rebuilt.params == cfg.params
        assert rebuilt.seed == cfg.seed


# ---------------------------------------------------------------------------
# entry point exit codes


class TestExitCodes:
    def test_no_arguments_prints_usage(self, capsys):
        assert cli.main([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert cli.main(["qpe", "--rogue", "1"]) == 2

    def test_bad_value(self, capsys):
        assert cli.main(["qpe", "--bits", "three"]) == 2
        assert "qpe.bits" in capsys.readouterr().err

    def test_missing_config_file(self, capsys):
        assert cli.main(["qpe", "--config", "/nonexistent/x.cfg"]) == 2

    def test_runtime_failure(self, capsys):
        assert cli.main(["qpe", "--phi", "1.5"]) == 3
        assert "error: qpe" in capsys.readouterr().err

    def test_version_flag(self, capsys):
        assert cli.main(["--version"]) == 0

    def test_success(self, capsys):
        assert cli.main(["densecode"]) == 0
        out = capsys.readouterr().out
        assert "decoded_x" in out

    def test_bad_seed(self, capsys):
        assert cli.main(["qpe", "--seed", "lots"]) == 2


# ---------------------------------------------------------------------------
# worked examples


class TestWorkedExamples:
    def test_noise_sweep_example(self, capsys):
        argv = [
            "noise-sweep", "--eps", "0.1", "--pE", "0.007", "--mu", "0.03",
            "--nu", "0.07", "--N", "10", "--dmax", "80", "--seed", "7",
        ]
        assert cli.main(argv) == 0
        table = table_from_csv(capsys.readouterr().out)
        assert table.columns == ("depth", "z_exact", "z_sampled", "z_biased")
        assert len(table.rows) == 81
        meta = dict(table.metadata)
        assert meta["seed"] == "7"
        assert meta["param.eps"] == "0.10000000000000001"
        # depth-0 exact value carries no decay at all
        assert float(table.rows[0][1]) == 1.0

    def test_qec_bench_half_error_rate(self, capsys):
        argv = [
            "qec", "bench", "--code", "bitflip", "--eps", "0.5",
            "--trials", "100000",
        ]
        assert cli.main(argv) == 0
        table = table_from_csv(capsys.readouterr().out)
        eps, analytic, sampled = (float(c) for c in table.rows[0])
        assert analytic == 0.5
        # binomial 5 sigma at 1e5 trials
        assert abs(sampled - 0.5) < 5 * 0.5 / math.sqrt(100000)

    def test_qec_stabilizer_partition(self, capsys):
        assert cli.main(["qec", "stabilizers", "--generators", "ZZI;IZZ"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        assert [r[0] for r in table.rows] == ["00", "01", "10", "11"]
        assert all(int(r[1]) == 2 for r in table.rows)

    def test_qpe_register_peaks_near_phase(self, capsys):
        assert cli.main(["qpe", "--phi", "0.625", "--bits", "3"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        probs = [float(r[2]) for r in table.rows]
        assert int(np.argmax(probs)) == 5  # 5/8 = 0.625 exactly
        assert probs[5] > 1 - 1e-9

    def test_hhl_matches_classical_solution(self, capsys):
        assert cli.main(["hhl", "--seed", "3"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        meta = dict(table.metadata)
        assert float(meta["fidelity"]) > 1 - 1e-8

    def test_teleport_branches_uniform_and_faithful(self, capsys):
        assert cli.main(["teleport", "--seed", "5"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        assert len(table.rows) == 4
        for row in table.rows:
            assert abs(float(row[2]) - 0.25) < 1e-12
            assert abs(float(row[3]) - 1.0) < 1e-12

    def test_ising_encode_partition(self, capsys):
        argv = ["ising", "encode", "--task", "partition",
                "--values", "1,2,3,4,6,10"]
        assert cli.main(argv) == 0
        meta = dict(table_from_csv(capsys.readouterr().out).metadata)
        assert float(meta["ground_energy"]) == 0.0
        # balanced split 13 | 13 exists
        assert meta["ground_states"]

    def test_anneal_success_grows_with_runtime(self, capsys):
        assert cli.main(["anneal", "--taus", "0.5,4"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        p = [float(r[1]) for r in table.rows]
        assert p[1] > p[0]

    def test_zne_estimates_improve_on_raw(self, capsys):
        assert cli.main(["zne", "--shots", "0"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        meta = dict(table.metadata)
        ideal = float(meta["ideal"])
        rich = float(meta["richardson"])
        baseline = float(table.rows[0][1])
        assert abs(rich - ideal) < 0.05 * abs(baseline - ideal)
        assert abs(rich - ideal) < 2e-2

    def test_pec_mitigated_beats_raw(self, capsys):
        assert cli.main(["pec", "--seed", "2"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        meta = dict(table.metadata)
        rows = {r[0]: (float(r[1]), float(r[2])) for r in table.rows}
        ideal = float(meta["ideal"])
        est, err = rows["mitigated"]
        assert abs(est - ideal) < 5 * err
        raw, _ = rows["unmitigated"]
        assert abs(raw - ideal) > abs(est - ideal)

    def test_dd_table_decreases_along_halving(self, capsys):
        assert cli.main(["dd"]) == 0
        table = table_from_csv(capsys.readouterr().out)
        gammas = [float(r[2]) for r in table.rows]
        assert all(b < a for a, b in zip(gammas, gammas[1:]))


# ---------------------------------------------------------------------------
# determinism


class TestDeterminism:
    ARGV = ["noise-sweep", "--N", "25", "--dmax", "30", "--seed", "21"]

    def test_same_seed_byte_identical(self, capsys):
        assert cli.main(self.ARGV) == 0
        first = capsys.readouterr().out
        assert cli.main(self.ARGV) == 0
        assert capsys.readouterr().out == first

    def test_seed_changes_only_sampled_columns(self, capsys):
        assert cli.main(self.ARGV) == 0
        a = table_from_csv(capsys.readouterr().out)
        argv = self.ARGV[:-1] + ["22"]
        assert cli.main(argv) == 0
        b = table_from_csv(capsys.readouterr().out)
        exact_a = [r[1] for r in a.rows]
        exact_b = [r[1] for r in b.rows]
        assert exact_a == exact_b
        sampled_a = [r[2] for r in a.rows]
        sampled_b = [r[2] for r in b.rows]
        assert sampled_a != sampled_b

    def test_out_file_matches_stdout(self, tmp_path, capsys):
        assert cli.main(["qpe"]) == 0
        stdout_text = capsys.readouterr().out
        path = tmp_path / "t.csv"
        assert cli.main(["qpe", "--out", str(path)]) == 0
        assert path.read_text() == stdout_text


# ---------------------------------------------------------------------------
# ising model serialization


class TestIsingText:
    def test_round_trip(self):
        model = ising.subset_sum_to_ising(7, (-5, -3, 1, 4, 9))
        text = ising.model_to_text(model)
        back = ising.model_from_text(text)
        assert back.n == model.n
        np.testing.assert_array_equal(back.h, model.h)
        np.testing.assert_array_equal(back.J, model.J)
        assert back.constant == model.constant

    def test_repr_floats_survive(self):
        model = ising.IsingModel([1 / 3, -0.7], [[0.0, math.pi], [0.0, 0.0]],
                                 constant=2 / 7)
        back = ising.model_from_text(ising.model_to_text(model))
        assert back.h[0] == model.h[0]
        assert back.J[0, 1] == math.pi
        assert back.constant == model.constant

    def test_comments_and_blanks_ignored(self):
        text = "# model\nn=2\n\nh 0 0.5\nh 1 -0.25\nJ 0 1 0.75\n"
        model = ising.model_from_text(text)
        assert model.h[1] == -0.25

    def test_bad_index_reported_with_line(self):
        with pytest.raises(ValueError, match="line 3"):
            ising.model_from_text("n=2\nh 0 0.5\nh 5 1.0\n")

    def test_missing_size_rejected(self):
        with pytest.raises(ValueError, match="n"):
            ising.model_from_text("h 0 0.5\n")


# ---------------------------------------------------------------------------
# bath files


class TestBathFile:
    TEXT = "# three modes\nbeta=2.0\nmode 0.08 1.0\nmode 0.10 1.7\nmode 0.12 2.3\n"

    def test_parse(self):
        bath = parse_bath_text(self.TEXT)
        assert bath.beta == 2.0
        assert bath.modes == ((0.08, 1.0), (0.10, 1.7), (0.12, 2.3))

    def test_missing_beta(self):
        with pytest.raises(ValueError, match="beta"):
            parse_bath_text("mode 0.1 1.0\n")

    def test_garbage_line_numbered(self):
        with pytest.raises(ValueError, match="line 2"):
            parse_bath_text("beta=1.0\nwhat is this\n")

    def test_cli_uses_bath_file(self, tmp_path, capsys):
        path = tmp_path / "bath.txt"
        path.write_text("beta=3.0\nmode 0.05 1.3\n")
        assert cli.main(["dd", "--bath", str(path)]) == 0
        meta = dict(table_from_csv(capsys.readouterr().out).metadata)
        assert meta["n_modes"] == "1"
        assert float(meta["beta"]) == 3.0


# ---------------------------------------------------------------------------
# reproduce-all


class TestReproduceAll:
    def test_writes_fourteen_tables(self, tmp_path, capsys):
        outdir = tmp_path / "tables"
        assert cli.main(
            ["reproduce-all", "--outdir", str(outdir), "--seed", "7"]
        ) == 0
        files = sorted(p.name for p in outdir.glob("*.csv"))
        assert len(files) == 14
        assert files[0] == "01_z_noiseless.csv"
        assert files[-1] == "14_dd_gamma.csv"
        for p in outdir.glob("*.csv"):
            table = table_from_csv(p.read_text())
            assert len(table.rows) >= 1
        manifest = capsys.readouterr().out
        assert manifest.count("wrote ") == 14

    def test_same_seed_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert cli.main(["reproduce-all", "--outdir", str(a)]) == 0
        assert cli.main(["reproduce-all", "--outdir", str(b)]) == 0
        for pa in a.glob("*.csv"):
            assert pa.read_text() == (b / pa.name).read_text()

    def test_distinct_seeds_share_analytic_tables(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert cli.main(
            ["reproduce-all", "--outdir", str(a), "--seed", "7"]
        ) == 0
        assert cli.main(
            ["reproduce-all", "--outdir", str(b), "--seed", "8"]
        ) == 0

        def body(path):
            return [
                line for line in path.read_text().splitlines()
                if not line.startswith("#")
            ]

        for name in ("01_z_noiseless", "02_z_miscalibrated", "04_z_measurement",
                     "05_z_environment", "08_pfail_repetition",
                     "09_pfail_concatenated", "10_pfail_correlated",
                     "14_dd_gamma"):
            assert body(a / f"{name}.csv") == body(b / f"{name}.csv")
        for name in ("03_z_sampled", "06_z_combined", "13_pec_estimates"):
            assert body(a / f"{name}.csv") != body(b / f"{name}.csv")
        # sampled tables keep their analytic column fixed across seeds
        ta = table_from_csv((a / "03_z_sampled.csv").read_text())
        tb = table_from_csv((b / "03_z_sampled.csv").read_text())
        assert [r[1] for r in ta.rows] == [r[1] for r in tb.rows]
        assert [r[2] for r in ta.rows] != [r[2] for r in tb.rows]

    def test_partial_failure_reported(self, tmp_path, capsys, monkeypatch):
        def boom(seed):
            raise RuntimeError("injected fault")

        patched = cli.TABLE_BUILDERS[:2] + (("99_broken", boom),)
        monkeypatch.setattr(cli, "TABLE_BUILDERS", patched)
        outdir = tmp_path / "tables"
        assert cli.main(["reproduce-all", "--outdir", str(outdir)]) == 3
        captured = capsys.readouterr()
        assert "failed: 99_broken: injected fault" in captured.err
        assert captured.out.count("wrote ") == 2

    def test_run_function_round_trip(self):
        cfg = build_config("qec bench", flag_values={"trials": "2000"}, env={})
        table = run(cfg)
        rebuilt = config_from_metadata(table.metadata)
        again = run(rebuilt)
        assert table_to_csv(again) == table_to_csv(table)
