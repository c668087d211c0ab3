"""Command-line front end: subcommands, formats, exit codes, determinism."""

import json

import pytest

from rlab.cli import main
from rlab.dyadic import make_step


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out) if out.strip().startswith("{") else None


def records(doc):
    return {rec["name"]: rec for rec in doc["records"]}


class TestNorm:
    def test_lp_values(self, capsys):
        code, doc = run_json(capsys, "norm", "--space", "lp:1", "--values", "2,0,0,0")
        assert code == 0
        assert records(doc)["norm"]["value"] == pytest.approx(0.5)

    def test_chi_input(self, capsys):
        code, doc = run_json(
            capsys, "norm", "--space", "lorentz:sqrt", "--chi", "1/4"
        )
        assert code == 0
        assert records(doc)["norm"]["value"] == pytest.approx(0.5)

    def test_fn_file(self, capsys, tmp_path):
        path = tmp_path / "f.json"
        path.write_text(make_step(1, [1, 2]).to_json())
        code, doc = run_json(capsys, "norm", "--space", "linfty", "--fn", str(path))
        assert code == 0
        assert records(doc)["norm"]["value"] == pytest.approx(2.0)

    def test_malformed_space_exit_1(self, capsys):
        code, _ = run(capsys, "norm", "--space", "zeta:3", "--values", "1,1")
        assert code == 1

    def test_missing_function_exit_1(self, capsys):
        code, _ = run(capsys, "norm", "--space", "lp:2")
        assert code == 1

    def test_bad_value_count_exit_1(self, capsys):
        code, _ = run(capsys, "norm", "--space", "lp:2", "--values", "1,2,3")
        assert code == 1


class TestRearrange:
    def test_sorted_output(self, capsys):
        code, doc = run_json(capsys, "rearrange", "--values", "3,1,2,3")
        assert code == 0
        runs = records(doc)["rearrangement"]["value"]["runs"]
        assert runs[0] == [2, "3/1"]


class TestKhintchine:
    def test_battery_passes(self, capsys):
        code, doc = run_json(capsys, "--seed", "1", "khintchine", "--n", "12", "--trials", "50")
        assert code == 0
        recs = records(doc)
        assert recs["violations"]["value"] == 0
        assert recs["l1_of_(1,1)"]["value"] == "1/1"
        assert recs["lower_constant_attained_by_(1,1)"]["value"] is True


class TestProjectionCommands:
    def test_coeffs(self, capsys):
        code, doc = run_json(capsys, "coeffs", "--values", "1,0,0,0", "--n", "2")
        assert code == 0
        assert records(doc)["coefficients"]["value"] == ["1/4", "1/4"]

    def test_project(self, capsys):
        code, doc = run_json(capsys, "project", "--values", "1,0,0,0", "--n", "2")
        assert code == 0
        proj = records(doc)["projection"]["value"]
        assert proj["runs"] == [[1, "1/2"], [2, "0/1"], [1, "-1/2"]]

    def test_equiv(self, capsys):
        code, doc = run_json(
            capsys, "--seed", "3", "equiv", "--space", "lp:2",
            "--weight", "const:1", "--n", "4", "--trials", "5",
        )
        assert code == 0
        recs = records(doc)
        assert recs["cLow"]["value"] == pytest.approx(1.0, rel=1e-6)
        assert recs["cHigh"]["value"] == pytest.approx(1.0, rel=1e-6)

    def test_multiplicator(self, capsys):
        code, doc = run_json(
            capsys, "multiplicator", "--space", "lp:1", "--values", "1,1,1,1",
            "--n", "3", "--budget", "20",
        )
        assert code == 0
        recs = records(doc)
        assert recs["lower"]["value"] == recs["upper"]["value"] == 1.0

    def test_projnorm(self, capsys):
        code, doc = run_json(
            capsys, "projnorm", "--space", "lp:2", "--weight", "const:1",
            "--n-list", "2,4", "--trials", "3",
        )
        assert code == 0
        recs = records(doc)
        assert recs["lower_bound[n=2]"]["value"] == pytest.approx(1.0, abs=1e-9)

    def test_theorems(self, capsys):
        code, doc = run_json(
            capsys, "theorems", "--space", "lp:2", "--weight", "const:1"
        )
        assert code == 0
        assert records(doc)["branch"]["value"] == "equivalence"


class TestIndices:
    def test_sqrt_phi(self, capsys):
        code, doc = run_json(capsys, "indices", "--phi", "sqrt")
        assert code == 0
        recs = records(doc)
        assert recs["gamma"]["value"] == pytest.approx(0.5, abs=0.02)
        assert recs["delta2"]["value"]["holds"] is False


class TestCex:
    def test_plan(self, capsys):
        code, doc = run_json(capsys, "cex", "plan", "--m", "1,16")
        assert code == 0
        assert records(doc)["condition_ok"]["value"] is True

    def test_plan_rejects_bad_growth(self, capsys):
        code, _ = run(capsys, "cex", "plan", "--m", "1,2")
        assert code == 1

    def test_build_relaxed(self, capsys):
        code, doc = run_json(
            capsys, "cex", "build", "--m", "2,3", "--relaxed", "--blocks", "2"
        )
        assert code == 0
        assert records(doc)["equimeasurable"]["value"] is True

    def test_certify_pass_exit_0(self, capsys):
        code, doc = run_json(capsys, "cex", "certify", "--m", "1,16", "--blocks", "2")
        assert code == 0
        assert records(doc)["verdict"]["value"] == "PASS"

    def test_certify_fail_exit_3(self, capsys, monkeypatch):
        # force a failing check to exercise the certificate exit contract
        from rlab import counterexample as cex_mod

        real = cex_mod.certify
        monkeypatch.setattr(
            cex_mod, "certify", lambda *a, **k: {**real(*a, **k), "verdict": "FAIL"}
        )
        code, _ = run(capsys, "cex", "certify", "--m", "1,16", "--blocks", "2")
        assert code == 3


class TestOutputModes:
    def test_out_file_and_csv(self, capsys, tmp_path):
        path = tmp_path / "r.csv"
        code = main([
            "--out", str(path), "--format", "csv",
            "norm", "--space", "lp:2", "--chi", "1/4",
        ])
        assert code == 0
        text = path.read_text()
        assert text.splitlines()[0] == "name,value,method,tolerance"

    def test_compare_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert main([
                "--out", str(path), "--seed", "5",
                "equiv", "--space", "lp:2", "--weight", "const:1",
                "--n", "4", "--trials", "5",
            ]) == 0
        code, doc = run_json(capsys, "compare", str(a), str(b))
        assert code == 0
        assert records(doc)["diff"]["value"] == {}

    def test_same_seed_byte_identical(self, capsys, tmp_path):
        texts = []
        for name in ("x.json", "y.json"):
            path = tmp_path / name
            assert main([
                "--out", str(path), "--seed", "11",
                "khintchine", "--n", "10", "--trials", "40",
            ]) == 0
            texts.append(path.read_bytes())
        assert texts[0] == texts[1]

    def test_unknown_command_exit_1(self, capsys):
        assert main(["definitely-not-a-command"]) == 1
