import json

import numpy as np
import pytest

from lnre.cli import Dataset, dispatch, load_csv, load_dataset, parse_density_spec, write_csv
from lnre.errors import EmptyFile, ParseError


class TestLoadCsv:
    def test_basic(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("1.0\n2.0\n")
        ds = load_csv(p)
        np.testing.assert_array_equal(ds.values, [1.0, 2.0])

    def test_header_detected(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("value\n1.5\n-3.25\n")
        np.testing.assert_array_equal(load_csv(p).values, [1.5, -3.25])

    def test_malformed_row(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("1.0\nabc\n3.0\n")
        with pytest.raises(ParseError) as err:
            load_csv(p)
        assert err.value.line_number == 2

    def test_empty_file(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("\n\n")
        with pytest.raises(EmptyFile):
            load_csv(p)

    def test_round_trip(self, tmp_path):
        ds = Dataset("x", np.array([1.0, -2.5, 0.1234567890123456]), "memory")
        p = tmp_path / "x.csv"
        write_csv(ds, p)
        back = load_csv(p)
        np.testing.assert_array_equal(back.values, ds.values)

    def test_embedded_newcomb(self):
        ds = load_dataset("newcomb")
        assert ds.values.size == 66
        assert ds.values.min() == -44.0
        assert ds.values.max() == 40.0


class TestDensitySpec:
    def test_student_t(self):
        dens = parse_density_spec("student-t:mu=0,sigma2=1,nu=3")
        assert dens.support == (-np.inf, np.inf)

    def test_bad_spec_raises_usage(self):
        from lnre.cli import UsageError

        with pytest.raises(UsageError):
            parse_density_spec("gamma:k=2")
        with pytest.raises(UsageError):
            parse_density_spec("student-t:mu=zero")


class TestDispatch:
    def test_counterexample_output(self, capsys):
        assert dispatch(["counterexample"]) == 0
        out = capsys.readouterr().out
        assert "0.5" in out and "0.484375" in out and "Var(Ybar) > Var(k)" in out

    def test_estimate_newcomb(self, capsys):
        rc = dispatch(
            [
                "estimate", "--family", "student-r", "--nu", "-7",
                "--known-mu", "26.21", "--beta", "1", "--data", "newcomb",
            ]
        )
        assert rc == 0
        line = capsys.readouterr().out.splitlines()[1]
        sigma2 = float(line.split(",")[5])
        assert sigma2 == pytest.approx(35.74, abs=0.05)

    def test_divergence_value(self, capsys):
        rc = dispatch(
            [
                "divergence", "--g", "bernoulli:p=0.5", "--f", "bernoulli:p=0.25",
                "--divergence", "lnre", "--alpha", "2", "--beta", "1",
            ]
        )
        assert rc == 0
        assert "0.223144" in capsys.readouterr().out

    def test_ks_subcommand(self, capsys):
        rc = dispatch(
            [
                "ks", "--data", "newcomb", "--family", "student-r",
                "--nu", "-7", "--mu", "26.21", "--sigma2", "35.74",
            ]
        )
        assert rc == 0
        assert float(capsys.readouterr().out.split("=")[1]) == pytest.approx(
            0.153, abs=0.003
        )

    def test_unknown_flag_is_usage_error(self, capsys):
        assert dispatch(["estimate", "--nope"]) == 1

    def test_unknown_subcommand_is_usage_error(self):
        assert dispatch(["frobnicate"]) == 1

    def test_numeric_failure_exit_code(self, capsys):
        # r-branch estimators refuse nu in (-1, 0)
        rc = dispatch(
            [
                "estimate", "--family", "student-r", "--nu", "-0.5",
                "--known-mu", "0", "--beta", "1", "--data", "newcomb",
            ]
        )
        assert rc == 2

    def test_help_exits_zero(self):
        assert dispatch(["--help"]) == 0


class TestManifest:
    def test_rerun_reproduces_bit_identically(self, tmp_path, capsys):
        out = tmp_path / "run"
        argv = [
            "simulate", "--estimand", "r-scale", "--nu", "-3",
            "--eta", "0.2", "--beta", "1", "--n", "20", "--reps", "5",
            "--seed", "11", "--contaminant-var", "25", "--out", str(out),
        ]
        assert dispatch(argv) == 0
        first = {p.name: p.read_bytes() for p in out.iterdir()}
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["outputs"] == ["study.csv"]
        assert manifest["seed"] == 11
        assert dispatch(manifest["argv"]) == 0
        second = {p.name: p.read_bytes() for p in out.iterdir()}
        assert first == second

    def test_newcomb_artifacts(self, tmp_path, capsys):
        out = tmp_path / "nc"
        rc = dispatch(["newcomb", "--beta", "1,2", "--out", str(out)])
        assert rc == 0
        names = {p.name for p in out.iterdir()}
        assert {
            "newcomb_fits.csv", "partition.csv", "histogram.tsv",
            "curves.tsv", "figure.svg", "manifest.json",
        } <= names
        svg = (out / "figure.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg

    def test_estimate_writes_manifest(self, tmp_path, capsys):
        out = tmp_path / "est"
        argv = [
            "estimate", "--family", "student-t", "--nu", "3",
            "--beta", "1,0.96", "--data", "newcomb", "--out", str(out),
        ]
        assert dispatch(argv) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["subcommand"] == "estimate"
        assert manifest["outputs"] == ["estimates.csv"]
