import csv
import io
import json
import subprocess
import sys

import pytest

from wfootrule.cli import main
from wfootrule.sampling import sample
from wfootrule.copulas import Gaussian


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def gauss_csv(tmp_path):
    b = sample(Gaussian(-0.3), 300, 1)
    p = tmp_path / "g.csv"
    p.write_text("x,y,z\n" + "".join(f"{u},{v},0\n" for u, v in zip(b.u, b.v)))
    return p


def test_truth_json():
    code, out = run("truth", "--copula", "gaussian:rho=-0.9")
    assert code == 0
    d = json.loads(out)
    assert d["phi_w"] == -0.69675 and d["footrule"] == -0.45223
    assert d["method"] == "closed-form" and d["error_bound"] == 0.0
    code, out = run("truth", "--copula", "frank:theta=-5", "--json")
    d = json.loads(out)
    assert round(d["phi_w"], 5) == -0.44055 and d["method"] == "quadrature"


def test_estimate_countermonotone(tmp_path):
    p = tmp_path / "two.csv"
    p.write_text("1,2\n2,1\n")
    code, out = run("estimate", "--input", str(p), "--json")
    assert code == 0
    d = json.loads(out)
    assert d["phi_hat"] == -1.0 and d["boundary"] is True and d["n"] == 2


def test_estimate_text_and_columns(gauss_csv):
    code, out = run("estimate", "--input", str(gauss_csv), "--cols", "x,y")
    assert code == 0 and "phi_hat" in out and "ci_95%" in out
    code, by_index = run("estimate", "--input", str(gauss_csv), "--cols", "0,1")
    assert by_index == out
    code, _ = run("estimate", "--input", str(gauss_csv), "--cols", "x,w")
    assert code == 1


def test_test_subcommand(gauss_csv, tmp_path):
    code, out = run("test", "--input", str(gauss_csv), "--json")
    d = json.loads(out)
    assert code == 0 and d["reject"] is True and d["verdict"].startswith("reject")
    p = tmp_path / "w.csv"
    p.write_text("".join(f"{i},{-i}\n" for i in range(20)))
    code, out = run("test", "--input", str(p))
    assert code == 0 and "boundary" in out


def test_no_arguments_is_usage_error():
    assert run()[0] == 1


@pytest.mark.parametrize("argv", [
    ["truth"], ["truth", "--copula", "clayton:theta=-1"], ["truth", "--copula", "nope"],
    ["estimate"], ["simulate", "--jobs", "0"], ["simulate", "--scale", "-1"],
    ["estimate", "--input", "x.csv", "--alpha", "1.5"], ["frobnicate"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 1


def test_data_errors(tmp_path):
    assert run("estimate", "--input", str(tmp_path / "missing.csv"))[0] == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n3,abc\n")
    assert run("estimate", "--input", str(bad))[0] == 3
    short = tmp_path / "short.csv"
    short.write_text("1,2\n")
    assert run("estimate", "--input", str(short))[0] == 3
    tied = tmp_path / "tied.csv"
    tied.write_text("1,2\n1,3\n2,4\n")
    assert run("estimate", "--input", str(tied), "--ties", "error")[0] == 3
    assert run("estimate", "--input", str(tied))[0] == 0
    empty = tmp_path / "empty.toml"
    empty.write_text("[[scenario]]\nfamily = 'pi'\n")
    assert run("simulate", "--manifest", str(empty))[0] == 3


def test_numerical_error_exit_code(monkeypatch):
    from wfootrule import cli
    from wfootrule.quadrature import QuadratureError

    def fail(*a, **k):
        raise QuadratureError("no convergence", 0.1, 1e-3)

    monkeypatch.setattr(cli, "true_values", fail)
    assert run("truth", "--copula", "pi")[0] == 2


def _manifest(tmp_path):
    p = tmp_path / "m.toml"
    p.write_text('seed = 1\n[[scenario]]\nfamily = "gaussian"\nparam = -0.3\nn = [20, 40]\nB = 5\n')
    return p


def test_simulate_csv_round_trip(tmp_path):
    out = tmp_path / "t.csv"
    code, _ = run("simulate", "--manifest", str(_manifest(tmp_path)), "--format", "csv", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["n"] for r in rows] == ["20", "40"]
    assert rows[0]["family"] == "gaussian" and rows[0]["param"] == "-0.3" and rows[0]["seed"] == "1"
    code, md = run("simulate", "--manifest", str(_manifest(tmp_path)))
    assert md.startswith("| Copula")


def test_seed_precedence(tmp_path, monkeypatch):
    m = str(_manifest(tmp_path))
    monkeypatch.setenv("WFOOTRULE_SEED", "42")
    code, env_out = run("simulate", "--manifest", m, "--format", "csv")
    assert {r["seed"] for r in csv.DictReader(io.StringIO(env_out))} == {"42"}
    code, flag_out = run("simulate", "--manifest", m, "--format", "csv", "--seed", "7")
    assert {r["seed"] for r in csv.DictReader(io.StringIO(flag_out))} == {"7"}
    monkeypatch.setenv("WFOOTRULE_SEED", "-3")
    assert run("simulate", "--manifest", m)[0] == 1


def test_every_subcommand_emits_valid_json(tmp_path, gauss_csv):
    outputs = [
        run("truth", "--copula", "w")[1],
        run("estimate", "--input", str(gauss_csv), "--json")[1],
        run("test", "--input", str(gauss_csv), "--json")[1],
        run("simulate", "--manifest", str(_manifest(tmp_path)), "--json")[1],
    ]
    docs = [json.loads(o) for o in outputs]
    assert docs[3]["results"][0]["summary"]["phi"]["sd"] >= 0
    assert {"rates", "results"} <= set(docs[3])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wfootrule", "truth", "--copula", "m"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["phi_w"] == 0.5
