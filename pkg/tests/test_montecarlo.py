import csv
import io
import math

import numpy as np
import pytest

from wfootrule.copulas import M, PI, W, Clayton, Frank, Gaussian
from wfootrule.montecarlo import (
    CSV_COLUMNS,
    McResult,
    Scenario,
    bias_decay_report,
    load_manifest,
    render_table,
    run_scenario,
    run_table,
)
from wfootrule.truth import true_values


def test_comonotone_rows_are_deterministic():
    res = run_scenario(Scenario(Gaussian(1.0), 100, 10))
    phi = res.summary["phi"]
    assert round(phi.mean, 5) == 0.48515
    assert phi.sd == 0.0
    assert round(phi.bias, 5) == -0.01485
    foot = res.summary["footrule"]
    assert foot == (1.0, 0.0, 0.0)


def test_countermonotone_rows():
    res = run_scenario(Scenario(W, 50, 7))
    assert res.summary["phi"] == (-1.0, 0.0, 0.0)
    assert np.all(res.estimates["phi"] == -1.0)


def test_frank_full_replication():
    res = run_scenario(Scenario(Frank(-5), 100, 10_000))
    s = res.summary["phi"]
    assert abs(s.mean - -0.44120) <= 3 * 0.04999 / 100
    assert s.sd == pytest.approx(0.04999, rel=0.15)
    assert res.ok and res.wall_time > 0


def test_independent_of_worker_count():
    s = Scenario(Clayton(2), 60, 40, seed=77, estimators=("phi", "footrule", "gini"))
    a = run_scenario(s, jobs=1)
    b = run_scenario(s, jobs=3)
    for k in s.estimators:
        np.testing.assert_array_equal(a.estimates[k], b.estimates[k])


def test_growing_b_keeps_prefix():
    a = run_scenario(Scenario(PI, 30, 100, seed=5))
    b = run_scenario(Scenario(PI, 30, 200, seed=5))
    np.testing.assert_array_equal(a.estimates["phi"], b.estimates["phi"][:100])


def test_gini_estimator_column():
    res = run_scenario(Scenario(M, 100, 3, estimators=("gini",)))
    assert res.summary["gini"].mean == pytest.approx(2 / 3 * (1 + 0.4851485148514851))
    assert list(res.summary) == ["gini"]


@pytest.mark.parametrize("kwargs", [dict(n=1, B=5), dict(n=10, B=0), dict(n=10, B=5, estimators=("tau",))])
def test_scenario_validation(kwargs):
    with pytest.raises(ValueError):
        Scenario(PI, **kwargs)


def test_scenario_ids_distinct():
    ids = {Scenario(c, n, 1).scenario_id for c in (PI, Clayton(2), Frank(-5)) for n in (100, 200)}
    assert len(ids) == 6


def test_failed_scenario_recorded(monkeypatch):
    from wfootrule import montecarlo

    def boom(*a, **k):
        raise RuntimeError("nope")

    monkeypatch.setattr(montecarlo, "sample", boom)
    results = run_table([Scenario(PI, 10, 2)])
    assert not results[0].ok and "replication 0" in results[0].error
    out = render_table(results, "csv")
    assert "FAILED" in out
    assert "FAILED" in render_table(results, "md")


def _results():
    return run_table([Scenario(Clayton(5), 100, 20), Scenario(Clayton(5), 200, 20),
                      Scenario(Gaussian(-0.9), 100, 20), Scenario(M, 100, 3)])


def test_render_csv():
    text = render_table(_results(), "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == CSV_COLUMNS
    assert rows[0]["family"] == "clayton" and rows[0]["param"] == "5"
    assert rows[2]["family"] == "gaussian" and rows[2]["param"] == "-0.9"
    assert rows[3]["family"] == "m" and rows[3]["sd_phi"] == "0.00000"
    assert rows[3]["bias_phi"] == "-0.01485"
    assert rows[3]["bias_footrule"] == "0.00000"
    assert rows[0]["truth_phi"] == "0.46021"


def test_render_markdown():
    text = render_table(_results(), "md")
    lines = text.splitlines()
    assert lines[0].startswith("| Copula") and set(lines[1]) <= set("|-:")
    assert "Gaussian" in text and "rho=-0.9" in text and "theta=5" in text
    assert len({len(line) for line in lines}) == 1
    assert "+0." in text or "-0." in text


def test_render_edge_cases():
    assert render_table([], "csv") == ",".join(CSV_COLUMNS) + "\n"
    assert render_table([], "md").count("\n") == 2
    one = render_table(run_table([Scenario(PI, 10, 2)]), "md")
    assert one.count("\n") == 3
    with pytest.raises(ValueError):
        render_table([], "html")


def test_bias_decay_report():
    rep = bias_decay_report(_results())
    rows = {(r["copula"], r["estimator"]): r for r in rep}
    assert set(rows) == {("clayton:theta=5", "phi"), ("clayton:theta=5", "footrule")}
    r = rows[("clayton:theta=5", "phi")]
    assert (r["n_from"], r["n_to"]) == (100, 200)
    assert r["bias_ratio"] > 0


def test_bias_decay_degenerate_ratios():
    res = run_table([Scenario(M, 10, 2), Scenario(M, 20, 2)])
    rows = {r["estimator"]: r for r in bias_decay_report(res)}
    assert rows["footrule"]["bias_ratio"] == 1.0
    assert rows["footrule"]["sd_ratio"] == 1.0
    assert rows["phi"]["sd_ratio"] == 1.0
    assert 0 < rows["phi"]["bias_ratio"] < 1
    w = run_table([Scenario(PI, 10, 1), Scenario(PI, 20, 1)])
    assert bias_decay_report(w)[0]["sd_ratio"] == 1.0  # B=1: both SDs are 0
    mixed = run_table([Scenario(M, 10, 1), Scenario(M, 20, 2)])
    mixed[0].summary["phi"] = mixed[0].summary["phi"]._replace(bias=0.0)
    assert math.isnan({r["estimator"]: r for r in bias_decay_report(mixed)}["phi"]["bias_ratio"])


def test_bundled_manifest():
    scenarios = load_manifest()
    assert len(scenarios) == 30
    assert {s.B for s in scenarios} == {10_000}
    assert {s.n for s in scenarios} == {100, 200, 500}
    assert scenarios[0].copula == Clayton(5) and scenarios[0].seed == 20240917
    assert {s.B for s in load_manifest(scale=0.05)} == {500}
    assert {s.seed for s in load_manifest(seed=3)} == {3}
    assert {s.B for s in load_manifest(scale=1e-9)} == {1}


def test_custom_manifest(tmp_path):
    p = tmp_path / "m.toml"
    p.write_text('seed = 9\n[[scenario]]\nfamily = "pi"\nn = 30\nB = 4\n'
                 '[[scenario]]\nfamily = "frank"\nparam = -5\nn = [20, 40]\nB = 2\n')
    s = load_manifest(p)
    assert [(str(x.copula), x.n, x.B, x.seed) for x in s] == [
        ("pi", 30, 4, 9), ("frank:theta=-5", 20, 2, 9), ("frank:theta=-5", 40, 2, 9)]


@pytest.mark.parametrize("body", ['[[scenario]]\nfamily = "pi"\nB = 4\n',
                                  '[[scenario]]\nfamily = "clayton"\nparam = -1\nn = 5\nB = 4\n'])
def test_bad_manifest(tmp_path, body):
    p = tmp_path / "m.toml"
    p.write_text(body)
    with pytest.raises(ValueError):
        load_manifest(p)
    with pytest.raises(ValueError):
        load_manifest(scale=0)


def test_result_truth_attached():
    res = run_scenario(Scenario(Frank(-5), 20, 2))
    assert isinstance(res, McResult)
    assert res.truth == true_values(Frank(-5))
    assert res.summary["phi"].bias == pytest.approx(res.summary["phi"].mean - res.truth.phi_w)
