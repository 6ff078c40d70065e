import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from selfdecomp.cli import GridSpec, UsageError, _glue_negative, build_parser, run


def schema(name):
    return json.loads(resources.files("selfdecomp").joinpath("schemas", name).read_text())


def header(text):
    return dict(line[2:].split(": ", 1) for line in text.splitlines() if line.startswith("# "))


class TestGridSpec:
    def test_parse(self):
        g = GridSpec.parse("-5:5:101")
        assert (g.lo, g.hi, g.points, g.log) == (-5.0, 5.0, 101, False)
        assert GridSpec.parse("0.001:50:4000,log").log

    @given(st.floats(-1e6, 1e6), st.floats(1e-3, 1e6), st.integers(2, 10_000), st.booleans())
    def test_round_trip(self, lo, width, n, log):
        lo = abs(lo) + 1e-3 if log else lo
        g = GridSpec(lo, lo + width, n, log)
        if not g.hi > g.lo:
            return
        assert GridSpec.parse(str(g)) == g

    @pytest.mark.parametrize("bad", ["1:2", "1:2:1", "2:1:5", "a:b:3", "1:2:3,lin", "0:1:5,log", "1:inf:4"])
    def test_rejects(self, bad):
        with pytest.raises(UsageError):
            GridSpec.parse(bad)

    def test_glue(self):
        assert _glue_negative(["verify", "--t", "-5:5:11", "--c", "0.5"]) == \
            ["verify", "--t=-5:5:11", "--c", "0.5"]


class TestClassify:
    def test_sinh(self):
        code, out = run(["classify", "--dist", "sinh", "--max-level", "4"])
        assert code == 0
        h = header(out)
        assert h["grid"] == "0.0001:50.0:4000,log" and h["refine_iters"] == "40"
        rows = list(csv.DictReader(line for line in out.splitlines() if not line.startswith("#")))
        assert rows[0]["achieved_level"] == "2"
        assert abs(float(rows[0]["witness_x"]) - 0.9) < 0.1

    def test_tanh_json(self):
        code, out = run(["classify", "--dist", "tanh", "--max-level", "2", "--json"])
        doc = json.loads(out)
        jsonschema.validate(doc, schema("verdict.schema.json"))
        assert code == 0 and doc["achieved_level"] == 0
        assert doc["mass_failures"][0]["level"] == 1

    @pytest.mark.parametrize("name,extra", [("sinh", []), ("logistic", ["--alpha", "2"]),
                                            ("talacko_zolotarev", ["--c", "0.3"])])
    def test_json_schema(self, name, extra):
        code, out = run(["classify", "--dist", name, "--max-level", "2", "--json",
                         "--grid", "0.01:20:400,log", *extra])
        assert code == 0
        jsonschema.validate(json.loads(out), schema("verdict.schema.json"))

    def test_logistic_alpha_two(self):
        code, out = run(["classify", "--dist", "logistic", "--alpha", "2", "--max-level", "2", "--json"])
        assert code == 0 and json.loads(out)["achieved_level"] >= 1

    @pytest.mark.parametrize("argv", [
        ["classify", "--dist", "nope", "--max-level", "1"],
        ["classify", "--dist", "sinh", "--max-level", "1", "--grid", "1:0:3"],
        ["classify", "--dist", "sinh", "--max-level", "1", "--alpha", "2"],
        ["classify", "--dist", "sinh"],
    ])
    def test_usage_errors(self, argv):
        assert run(argv)[0] == 2


class TestVerify:
    def test_decompose(self):
        code, out = run(["verify", "--check", "decompose", "--dist", "cosh", "--c", "0.3", "--t", "-5:5:101"])
        assert code == 0 and float(header(out)["max_deviation"]) < 1e-8

    def test_gamma_identity(self):
        code, out = run(["verify", "--check", "gamma-identity", "--alpha", "0.5", "--t", "-5:5:101"])
        assert code == 0 and header(out)["result"] == "PASS"

    def test_residual(self):
        code, out = run(["verify", "--check", "residual", "--dist", "sinh", "--factors", "0.5,0.6,0.7"])
        h = header(out)
        assert code == 0 and h["nonnegative"] == "True"

    def test_cf_json(self):
        code, out = run(["verify", "--check", "cf", "--dist", "cosh", "--t", "-10:10:41", "--json"])
        doc = json.loads(out)
        jsonschema.validate(doc, schema("verify.schema.json"))
        assert code == 0 and doc["passed"] and len(doc["points"]) == 41

    def test_bdcf_numeric_reference(self):
        code, out = run(["verify", "--check", "bdcf", "--dist", "logistic", "--alpha", "2", "--t", "-3:3:13"])
        assert code == 0 and header(out)["reference"] == "d_operator_exponent"

    def test_tolerance_failure_exit_one(self):
        code, _ = run(["verify", "--check", "decompose", "--dist", "sinh", "--c", "0.5", "--t", "-5:5:11",
                       "--tol", "0"])
        assert code == 1

    def test_defaults_in_header(self):
        _, out = run(["verify", "--check", "cf", "--dist", "sinh", "--t", "-1:1:3"])
        h = header(out)
        assert h["tol"] == "1e-06" and h["K"] == "10000"

    @pytest.mark.parametrize("argv", [
        ["verify", "--check", "decompose", "--dist", "cosh"],
        ["verify", "--check", "decompose", "--dist", "cosh", "--c", "1.5"],
        ["verify", "--check", "residual", "--dist", "sinh"],
        ["verify", "--check", "residual", "--dist", "sinh", "--factors", "0.5,2"],
        ["verify", "--check", "cf"],
        ["verify", "--check", "nope"],
    ])
    def test_usage_errors(self, argv):
        assert run(argv)[0] == 2


class TestSample:
    def test_ecf_pass(self, tmp_path):
        out_file = tmp_path / "s.csv"
        code, out = run(["sample", "--dist", "sinh", "--n", "100000", "--K", "1000", "--seed", "42",
                         "--ecf", "-8:8:161", "--out", str(out_file)])
        assert code == 0 and header(out)["result"] == "PASS"
        assert out_file.read_text().count("\n") == 100_001

    def test_row_count(self):
        code, out = run(["sample", "--dist", "generalized_logistic", "--alpha", "2", "--n", "100000",
                         "--seed", "7"])
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == ["x"] and len(rows) == 100_001

    def test_deterministic_files(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for f in (a, b):
            assert run(["sample", "--dist", "laplace", "--n", "10", "--seed", "1", "--out", str(f)])[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes().startswith(b"x\r\n")

    def test_ecf_out(self, tmp_path):
        e = tmp_path / "e.csv"
        code, out = run(["sample", "--dist", "cosh", "--n", "2000", "--seed", "3", "--ecf", "-4:4:9",
                         "--ecf-out", str(e), "--out", str(tmp_path / "s.csv")])
        assert code == 0 and out == ""
        assert e.read_text().splitlines()[0] == "t,ecf,target,band"

    def test_wrong_law_fails(self, tmp_path, monkeypatch):
        # sinh draws judged against the cosh cf must give exit 1
        import selfdecomp.cli as cli
        from selfdecomp.distributions import catalog_get
        real = cli.ecf_check
        monkeypatch.setattr(cli, "ecf_check",
                            lambda xs, cf, t: real(xs, catalog_get("cosh").cf_closed, t))
        code, _ = run(["sample", "--dist", "sinh", "--n", "100000", "--seed", "1", "--ecf", "-8:8:161",
                       "--out", str(tmp_path / "x.csv")])
        assert code == 1

    def test_io_failure(self, tmp_path):
        code, _ = run(["sample", "--dist", "laplace", "--n", "5", "--out", str(tmp_path / "no" / "x.csv")])
        assert code == 2

    def test_no_series(self):
        assert run(["sample", "--dist", "tanh", "--n", "5"])[0] == 2


def test_help_lists_catalog(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--help"])
    text = capsys.readouterr().out
    for name, verdict in [("sinh", "L2 \\ L3"), ("tanh", "L0 \\ L1"), ("logistic", "L1 (at least)")]:
        assert f"{name}: {verdict}" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "selfdecomp", "catalog"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("name,params,cf,class")
