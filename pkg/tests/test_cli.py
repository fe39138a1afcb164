"""CLI behavior: formatting, determinism, config precedence, exit codes."""

import json

import pytest
from mpmath import mp, mpf

import guelab.cli as cli
from guelab.exceptions import PrecisionUnreachableError
from guelab.precision import PrecisionContext
from guelab.weights import WeightSpec, moment_table


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFormatSci:
    def test_forms(self):
        with mp.workdps(40):
            assert cli.format_sci(mpf("0.25")) == (
                "2.50000000000000000000000000000e-1"
            )
            assert cli.format_sci(mpf(0)) == "0.0e+0"
            s = cli.format_sci(mpf(3) / 7)
            mantissa, exp = s.split("e")
            assert len(mantissa.replace(".", "").lstrip("-")) == 30
            assert exp == "-1"
            assert "e" in cli.format_sci(mpf("12345.678"))

    def test_roundtrip_30_digits(self):
        with mp.workdps(45):
            x = mp.pi / 7
            back = mpf(cli.format_sci(x))
            assert abs(back - x) < abs(x) * mpf("1e-29")


class TestCompare:
    def test_zero_alpha_diff_column_vanishes(self, capsys):
        code, out, _ = run_cli(
            capsys, ["compare", "--lambdas", "0.3", "--alphas", "0", "--n-list", "2,4"]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,exact_log,asym_log,diff,normalized,runtime_s"
        for line in lines[1:]:
            cells = line.split(",")
            assert abs(float(cells[3])) < 1e-40
            assert cells[2] == "0.0e+0"

    def test_bit_stable_all_but_runtime(self, capsys):
        argv = ["compare", "--lambdas", "0.3", "--alphas", "0.5", "--n-list", "2,4"]
        _, out1, _ = run_cli(capsys, argv)
        _, out2, _ = run_cli(capsys, argv)

        def strip_runtime(text):
            return [line.rsplit(",", 1)[0] for line in text.strip().splitlines()]

        assert strip_runtime(out1) == strip_runtime(out2)

    def test_rows_sorted_by_n(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["compare", "--lambdas", "0.3", "--alphas", "0.5", "--n-list", "4,2"],
        )
        ns = [int(line.split(",")[0]) for line in out.strip().splitlines()[1:]]
        assert ns == sorted(ns)

    def test_normalized_blank_below_2(self, capsys):
        code, out, _ = run_cli(
            capsys, ["compare", "--lambdas", "0.3", "--alphas", "0.5", "--n-list", "1"]
        )
        row = out.strip().splitlines()[1].split(",")
        assert row[4] == ""

    def test_outside_regime(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "compare",
                "--regime",
                "outside",
                "--lambdas",
                "1.5",
                "--alphas",
                "0.5",
                "--n-list",
                "4",
            ],
        )
        assert code == 0
        assert len(out.strip().splitlines()) == 2

    def test_json_matches_csv_strings(self, capsys, tmp_path):
        argv = ["compare", "--lambdas", "0.3", "--alphas", "0.5", "--n-list", "2"]
        _, out_csv, _ = run_cli(capsys, argv)
        _, out_json, _ = run_cli(capsys, argv + ["--format", "json"])
        payload = json.loads(out_json)
        csv_rows = [line.split(",") for line in out_csv.strip().splitlines()[1:]]
        assert payload["columns"] == out_csv.strip().splitlines()[0].split(",")
        for csv_row, json_row in zip(csv_rows, payload["rows"]):
            assert csv_row[:-1] == json_row[:-1]  # runtime may differ

    def test_out_path(self, capsys, tmp_path):
        target = tmp_path / "rows.csv"
        code, out, _ = run_cli(
            capsys,
            [
                "compare",
                "--lambdas",
                "0.3",
                "--alphas",
                "0",
                "--n-list",
                "2",
                "--out",
                str(target),
            ],
        )
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("n,exact_log")

    def test_invalid_spec_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, ["compare", "--lambdas", "1.0", "--alphas", "0.5", "--n-list", "2"]
        )
        assert code == 2
        assert "error" in err

    def test_mismatched_spec_exits_2(self, capsys):
        code, _, _ = run_cli(
            capsys,
            ["compare", "--lambdas", "0.1,0.2", "--alphas", "0.5", "--n-list", "2"],
        )
        assert code == 2


class TestCoeffs:
    def test_gaussian_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, ["coeffs", "--lambdas", "0", "--alphas", "0", "--n-list", "4"]
        )
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == (
            "n,kappa2_exact,kappa2_asym,beta_exact,beta_asym,"
            "gamma_exact,gamma_asym,kappa2_n2dev"
        )
        cells = row.split(",")
        assert cells[1] == cells[2]  # correction term vanishes exactly
        assert float(cells[3]) == 0.0 or abs(float(cells[3])) < 1e-40
        assert abs(float(cells[7])) < 1e-40

    def test_symmetric_beta_columns_vanish(self, capsys):
        code, out, _ = run_cli(
            capsys, ["coeffs", "--lambdas", "0", "--alphas", "0.5", "--n-list", "4"]
        )
        row = out.strip().splitlines()[1].split(",")
        assert abs(float(row[3])) < 1e-30
        assert abs(float(row[4])) < 1e-30


class TestMoments:
    def test_values_match_library(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["moments", "--lambdas", "0", "--alphas", "1", "--n-list", "2", "--kmax", "4"],
        )
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        table = moment_table(
            WeightSpec(lambdas=["0"], alphas=["1"], n=2),
            4,
            PrecisionContext(digits=60),
        )
        with mp.workdps(40):
            for k, cell in rows:
                expected = cli.format_sci(table.values[int(k)])
                assert cell == expected

    def test_requires_single_n(self, capsys):
        code, _, _ = run_cli(
            capsys, ["moments", "--lambdas", "0", "--alphas", "1", "--n-list", "2,4"]
        )
        assert code == 2


class TestDiffId:
    def test_row_structure(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["diff-id", "--lambdas", "0.3", "--alphas", "0.5", "--n-list", "4", "--nu", "0"],
        )
        assert code == 0
        header = out.strip().splitlines()[0]
        assert header == "n,fd_log_derivative,identity_rhs,diff,normalized,runtime_s"

    def test_digit_floor(self, capsys):
        code, _, _ = run_cli(
            capsys,
            [
                "diff-id",
                "--lambdas",
                "0.3",
                "--alphas",
                "0.5",
                "--n-list",
                "4",
                "--digits",
                "40",
            ],
        )
        assert code == 2


class TestMc:
    def test_row(self, capsys):
        code, out, _ = run_cli(
            capsys,
            [
                "mc",
                "--lambdas",
                "0.2",
                "--alphas",
                "1",
                "--n-list",
                "3",
                "--samples",
                "2000",
                "--seed",
                "5",
            ],
        )
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert row[0] == "3" and row[1] == "2000" and row[2] == "5"
        assert float(row[6]) < 6  # sigma deviation sane


class TestConfigPrecedence:
    def test_file_then_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "digits=60\nlambdas=0.3\nalphas=0\nn_list=2\nformat=csv\n# comment\n"
        )
        code, out_file, _ = run_cli(capsys, ["compare", "--config", str(cfg)])
        assert code == 0
        code, out_flag, _ = run_cli(
            capsys, ["compare", "--config", str(cfg), "--n-list", "4"]
        )
        assert out_file.splitlines()[1].split(",")[0] == "2"
        assert out_flag.splitlines()[1].split(",")[0] == "4"

    def test_env_digits_default(self, capsys, monkeypatch):
        monkeypatch.setenv(cli.ENV_DIGITS, "64")
        parser = cli.make_parser()
        args = parser.parse_args(
            ["compare", "--lambdas", "0.3", "--alphas", "0", "--n-list", "2"]
        )
        cfg = cli.build_config(args)
        assert cfg.digits == 64

    def test_unknown_config_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus=1\n")
        code, _, _ = run_cli(
            capsys,
            ["compare", "--config", str(cfg), "--lambdas", "0.3", "--alphas", "0", "--n-list", "2"],
        )
        assert code == 2


class TestSelfcheckCommand:
    def test_clean_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, ["selfcheck", "--digits", "40"])
        assert code == 0
        assert "FAIL" not in out
        assert out.strip().endswith("selfchecks passed")

    def test_corrupted_moments_fail_cross_check(self, capsys):
        code, out, _ = run_cli(
            capsys, ["selfcheck", "--digits", "40", "--corrupt-moments"]
        )
        assert code == 1
        assert "FAIL determinant_vs_kappa_product" in out


class TestExitCodes:
    def test_precision_unreachable_exits_3(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise PrecisionUnreachableError("injected")

        monkeypatch.setattr(cli, "moment_table", boom)
        code, _, err = run_cli(
            capsys,
            ["moments", "--lambdas", "0", "--alphas", "1", "--n-list", "2"],
        )
        assert code == 3
        assert "injected" in err
