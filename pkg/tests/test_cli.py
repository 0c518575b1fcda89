"""cli: every subcommand end to end through main(argv), exit codes,
output formats, and byte determinism."""
import csv
import io
import json

import pytest

from beurling.cli import main

ADM1_JSON = {
    "terms": [
        {"a_re": 1, "a_im": 0, "theta": 1},
        {"a_re": -2, "a_im": 0, "theta": "1/2"},
    ]
}
SPEC_A_JSON = {
    "terms": [
        {"a_re": 1, "a_im": 0, "theta": "1/2"},
        {"a_re": -1, "a_im": 0, "theta": "1/3"},
        {"a_re": -1, "a_im": 0, "theta": "1/6"},
    ]
}


@pytest.fixture
def adm1_file(tmp_path):
    p = tmp_path / "adm1.json"
    p.write_text(json.dumps(ADM1_JSON))
    return str(p)


@pytest.fixture
def spec_a_file(tmp_path):
    p = tmp_path / "spec_a.json"
    p.write_text(json.dumps(SPEC_A_JSON))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_default_empty_spec(self, capsys):
        code, out, _ = run(capsys, ["eval", "--x", "0.5"])
        assert code == 0
        doc = json.loads(out)
        assert doc["F"]["re"] == 1.0

    def test_adm1_point(self, capsys, adm1_file):
        code, out, _ = run(capsys, ["eval", "--spec", adm1_file, "--x", "0.4"])
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["f"]["re"]) < 1e-15
        assert abs(doc["F"]["re"] - 1.0) < 1e-15

    def test_x_out_of_domain(self, capsys, adm1_file):
        code, _, err = run(capsys, ["eval", "--spec", adm1_file, "--x", "1.5"])
        assert code == 2
        assert "error" in err


class TestMellin:
    def test_closed_vs_quadrature(self, capsys, adm1_file):
        code, out1, _ = run(capsys, ["mellin", "--spec", adm1_file, "--s", "2"])
        assert code == 0
        d1 = json.loads(out1)
        assert d1["provenance"] == "closed_form"
        assert abs(d1["value"]["re"] - 0.08876648328794339) < 1e-13
        code, out2, _ = run(
            capsys,
            ["mellin", "--spec", adm1_file, "--s", "2", "--method", "quadrature"],
        )
        assert code == 0
        d2 = json.loads(out2)
        assert d2["provenance"] == "quadrature"
        assert abs(d2["value"]["re"] - d1["value"]["re"]) < 1e-10

    def test_complex_s(self, capsys, adm1_file):
        code, out, _ = run(capsys, ["mellin", "--spec", adm1_file, "--s", "1.5,2"])
        assert code == 0
        doc = json.loads(out)
        assert doc["s"] == {"re": 1.5, "im": 2.0}

    def test_reconstruct_method(self, capsys, spec_a_file):
        code, out, _ = run(
            capsys,
            ["mellin", "--spec", spec_a_file, "--s", "2", "--method", "reconstruct",
             "--n-max", "400"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["provenance"] == "reconstructed"
        # closed form: (1 - zeta(2)/9) / 2
        assert abs(doc["value"]["re"] - 0.40861477406398743) < 2e-3

    def test_pole_is_exit_2(self, capsys, adm1_file):
        code, _, err = run(capsys, ["mellin", "--spec", adm1_file, "--s", "1"])
        assert code == 2


class TestMellinEven:
    def test_csv(self, capsys, spec_a_file):
        code, out, _ = run(
            capsys, ["mellin-even", "--spec", spec_a_file, "--l-max", "4"]
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["l", "M_2l_re", "M_2l_im", "bound", "satisfied"]
        assert len(rows) == 5
        assert all(r[4] == "true" for r in rows[1:])
        # l = 1 value: (1 - zeta(2)/9) / 2
        assert abs(float(rows[1][1]) - 0.40861477406398743) < 1e-12

    def test_non_admissible_exit_2(self, tmp_path, capsys):
        f = tmp_path / "na.json"
        f.write_text('{"terms": [{"a_re": 1, "a_im": 0, "theta": 1}]}')
        code, _, _ = run(capsys, ["mellin-even", "--spec", str(f), "--l-max", "2"])
        assert code == 2


class TestFourier:
    def test_direct_csv(self, capsys, adm1_file):
        code, out, _ = run(
            capsys, ["fourier", "--spec", adm1_file, "--n-max", "3"]
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "re(c)", "im(c)", "method", "L_or_J", "certificate"]
        assert abs(float(rows[1][1]) - 0.43261019341962154) < 1e-12

    def test_even_mellin_with_L(self, capsys, spec_a_file):
        code, out, _ = run(
            capsys,
            ["fourier", "--spec", spec_a_file, "--n-max", "2",
             "--method", "even-mellin", "--L", "24"],
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[1][3] == "even_mellin_exact_L"
        assert rows[1][4] == "24"

    def test_hypothesis_failure_exit_2(self, capsys, adm1_file):
        code, _, err = run(
            capsys,
            ["fourier", "--spec", adm1_file, "--n-max", "2", "--method", "even-mellin"],
        )
        assert code == 2

    def test_json_format(self, capsys, adm1_file):
        code, out, _ = run(
            capsys,
            ["fourier", "--spec", adm1_file, "--n-max", "2", "--format", "json"],
        )
        assert code == 0
        doc = json.loads(out)
        assert len(doc) == 2 and doc[0]["n"] == 1


class TestRoutesCheck:
    def test_agreement_and_comment(self, capsys, spec_a_file):
        code, out, _ = run(
            capsys, ["routes-check", "--spec", spec_a_file, "--n-max", "6"]
        )
        assert code == 0
        assert out.strip().splitlines()[-1].startswith("# max_pairwise_gap,")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == [
            "n", "c_direct", "c_cosine", "c_even_mellin", "max_gap", "cert_sum", "agree",
        ]
        data = [r for r in rows[1:] if r and not r[0].startswith("#")]
        assert len(data) == 6
        assert all(r[6] == "true" for r in data)

    def test_determinism_across_runs_and_threads(self, tmp_path, capsys, spec_a_file):
        outs = []
        for threads, tag in (("1", "a"), ("1", "b"), ("4", "c")):
            f = tmp_path / f"routes_{tag}.csv"
            code, _, _ = run(
                capsys,
                ["routes-check", "--spec", spec_a_file, "--n-max", "8",
                 "--threads", threads, "--out", str(f)],
            )
            assert code == 0
            outs.append(f.read_bytes())
        assert outs[0] == outs[1] == outs[2]


class TestNorm:
    def test_adm1_report(self, capsys, adm1_file):
        code, out, _ = run(
            capsys, ["norm", "--spec", adm1_file, "--n-max", "2048", "--format", "json"]
        )
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["oracle"] ** 2 - 0.30685281944005469) < 1e-9
        assert doc["gap"] <= doc["tail_estimate"]


class TestReconstruct:
    def test_summary_and_csv(self, tmp_path, capsys, spec_a_file):
        conv = tmp_path / "conv.csv"
        code, out, _ = run(
            capsys,
            ["reconstruct", "--spec", spec_a_file, "--s", "2", "--n-max", "200",
             "--out", str(conv)],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["n_max"] == 200
        assert doc["value"]["provenance"] == "reconstructed"
        rows = list(csv.reader(io.StringIO(conv.read_text())))
        assert rows[0] == ["n", "term_value", "partial_sum"]
        assert len(rows) == 201
        assert abs(float(rows[-1][2]) - doc["value"]["value"]["re"]) < 1e-15

    def test_hypothesis_failure(self, capsys, adm1_file):
        code, _, _ = run(
            capsys, ["reconstruct", "--spec", adm1_file, "--s", "2", "--n-max", "50"]
        )
        assert code == 2


class TestOptimize:
    def test_unit_family(self, capsys):
        code, out, _ = run(capsys, ["optimize", "--thetas", "unit:4"])
        assert code == 0
        doc = json.loads(out)
        rep = doc["report"]
        assert len(rep["a"]) == 4
        assert rep["gap_kkt_quadrature"] < 1e-5
        # the emitted spec is exactly admissible
        assert rep["constraint_residual_exact"] == "0"
        assert len(doc["spec"]["terms"]) == 4

    def test_thetas_file(self, tmp_path, capsys):
        f = tmp_path / "thetas.json"
        f.write_text('["1", "1/2"]')
        code, out, _ = run(capsys, ["optimize", "--thetas", str(f)])
        assert code == 0
        rep = json.loads(out)["report"]
        assert abs(rep["a"][0] - 1.0) < 1e-6
        assert abs(rep["a"][1] + 2.0) < 1e-6

    def test_duplicates_exit_2(self, tmp_path, capsys):
        f = tmp_path / "dup.json"
        f.write_text('["1/2", "1/2"]')
        code, _, _ = run(capsys, ["optimize", "--thetas", str(f)])
        assert code == 2


class TestSweep:
    def test_csv_rows(self, capsys):
        code, out, _ = run(capsys, ["sweep", "--unit-n-from", "1", "--unit-n-to", "5"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["N", "norm_sq", "norm"]
        assert len(rows) == 6
        assert abs(float(rows[5][1]) - 0.036319017938170606) < 1e-7

    def test_determinism(self, tmp_path, capsys):
        blobs = []
        for tag, threads in (("a", "1"), ("b", "4")):
            f = tmp_path / f"sweep_{tag}.csv"
            code, _, _ = run(
                capsys,
                ["sweep", "--unit-n-from", "1", "--unit-n-to", "8",
                 "--threads", threads, "--out", str(f)],
            )
            assert code == 0
            blobs.append(f.read_bytes())
        assert blobs[0] == blobs[1]


class TestBadInput:
    def test_malformed_spec(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text('{"terms": [{"a_re": 1, "a_im": 0, "theta": 2.5}]}')
        code, _, err = run(capsys, ["eval", "--spec", str(f), "--x", "0.5"])
        assert code == 2
        assert "error" in err

    def test_unparseable_json(self, tmp_path, capsys):
        f = tmp_path / "nojson.json"
        f.write_text("{")
        code, _, _ = run(capsys, ["eval", "--spec", str(f), "--x", "0.5"])
        assert code == 2

    def test_tolerance_not_met_exit_3(self, tmp_path, capsys):
        # irrational theta: the exact-rational period is astronomical, so
        # quadrature falls back to x-space and cannot certify 1e-10
        import math
        f = tmp_path / "irr.json"
        f.write_text(json.dumps(
            {"terms": [{"a_re": 1, "a_im": 0, "theta": 1 / math.pi}]}
        ))
        code, _, err = run(
            capsys,
            ["mellin", "--spec", str(f), "--s", "2", "--method", "quadrature",
             "--tol", "1e-12"],
        )
        assert code == 3
        assert "tolerance" in err
