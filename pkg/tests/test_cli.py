import csv
import io
import json

import pytest

from tssa.cli import main, verify
from tssa.params import WORKED_POINT, params_to_json
from tssa.sweep import SweepConfig, run_sweep
from tssa.tworisk import solve_ede, stability_conditions


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "worked.json"
    path.write_text(json.dumps(params_to_json(WORKED_POINT)))
    return str(path)


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_analyze_worked(worked_file, capsys):
    assert main(["analyze", "--params", worked_file]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["r0"] == pytest.approx(2)
    cond = rep["conditions"]
    assert (cond["A"], cond["B"], cond["C"]) == pytest.approx((2, 3, 18))
    assert rep["ede"][0]["verdict"] == "Stable"
    assert rep["ede"][0]["numeric"]["agree"] is True
    assert rep["dfe"]["verdict"] == "Unstable"
    assert rep["params"]["kappa"] == 1.0


def test_analyze_subthreshold(tmp_path, capsys):
    path = _write(tmp_path, "p.json", params_to_json(WORKED_POINT.replace(b=0.5)))
    assert main(["analyze", "--params", path]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["ede"] == [] and rep["dfe"]["verdict"] == "Stable"


def test_analyze_malformed(tmp_path, capsys):
    assert main(["analyze", "--params", _write(tmp_path, "bad.json", "{not json")]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "input"


def test_analyze_unknown_field(tmp_path):
    obj = params_to_json(WORKED_POINT)
    obj["dimensionless"]["zeta"] = 1.0
    assert main(["analyze", "--params", _write(tmp_path, "p.json", obj)]) == 1


def test_missing_file():
    assert main(["analyze", "--params", "/nonexistent/p.json"]) == 1


def test_bad_subcommand():
    assert main(["frobnicate"]) == 1


def test_charpoly_cli(tmp_path, capsys):
    path = _write(tmp_path, "m.json", {"n": 2, "entries": [[0, 1], [-2, -3]]})
    assert main(["charpoly", "--matrix", path]) == 0
    assert json.loads(capsys.readouterr().out)["coeffs"] == pytest.approx([3, 2])


def test_charpoly_gamma_cli(tmp_path, capsys):
    path = _write(tmp_path, "m.json", {"n": 2, "entries": [["-G - 1", "G"], ["G", "-G"]]})
    assert main(["charpoly", "--matrix", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["leading"][1] == {"k": 1.0, "p": 1}


def test_routh_cli(capsys):
    assert main(["routh", "--coeffs", "1,2,3,1,1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["first_column"] == pytest.approx([1, 2, 2.5, 0.2, 1])
    assert out["verdict"] == "Stable"


def test_routh_cli_gamma(capsys):
    assert main(["routh", "--coeffs", "1,2*G,10*G,G^2,2.5*G^2,1.5*G^2", "--gamma", "1000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "Stable"
    assert out["values"][0][0] == 1.0


def test_routh_cli_indeterminate(capsys):
    assert main(["routh", "--coeffs", "1,0,1"]) == 3


def test_routh_cli_bad(capsys):
    assert main(["routh", "--coeffs", "1,x"]) == 1
    assert main(["routh", "--coeffs", "0,1,1"]) == 1


def test_verify_worked(worked_file, capsys):
    assert main(["verify", "--params", worked_file, "--eps", "1e-2,1e-3"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["agree"] for r in rows] == [True, True]
    assert all(r["flag"] == "" for r in rows)


def test_verify_large_eps_warns(worked_file, capsys):
    assert main(["verify", "--params", worked_file, "--eps", "0.5"]) == 0
    cap = capsys.readouterr()
    assert "asymptotic regime" in cap.err
    assert len(json.loads(cap.out)) == 1


def test_verify_near_margin():
    # bisect omega onto the fold where the two backward-bifurcation branches merge;
    # the condition margins of both branches vanish there
    base = WORKED_POINT.replace(b=8.0, m=0.85, sigma=0.0625)
    lo, hi = 14.5, 15.25
    assert len(solve_ede(base.replace(omega=lo))) == 2 and not solve_ede(base.replace(omega=hi))
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if len(solve_ede(base.replace(omega=mid))) == 2:
            lo = mid
        else:
            hi = mid
    p = base.replace(omega=lo)
    assert all(abs(stability_conditions(p, e).margin) < 0.05 for e in solve_ede(p))
    rows = verify(p, [1e-3])
    assert len(rows) == 2
    assert all("near-margin" in r["flag"] for r in rows)


def test_verify_csv(worked_file, capsys):
    assert main(["verify", "--params", worked_file, "--eps", "1e-3", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["agree"] == "true"


def test_sweep_deterministic_across_jobs(tmp_path):
    cfg = _write(tmp_path, "cfg.json", {"samples": 40, "accept": "forward", "eps": [1e-3]})
    outs = []
    for jobs, name in [(1, "a.csv"), (2, "b.csv"), (1, "c.csv")]:
        out = tmp_path / name
        assert main(["sweep", "--config", cfg, "--seed", "7", "--jobs", str(jobs), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    rows = list(csv.DictReader(io.StringIO(outs[0].decode())))
    assert len({r["sample"] for r in rows}) == 40


def test_sweep_seed_env(tmp_path, monkeypatch):
    a, b, c = (tmp_path / f"{x}.csv" for x in "abc")
    monkeypatch.setenv("TSSA_SEED", "5")
    assert main(["sweep", "--samples", "5", "--out", str(a)]) == 0
    assert main(["sweep", "--samples", "5", "--seed", "5", "--out", str(b)]) == 0
    monkeypatch.delenv("TSSA_SEED")
    assert main(["sweep", "--samples", "5", "--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()


def test_sweep_default_seed_is_42(monkeypatch):
    monkeypatch.delenv("TSSA_SEED", raising=False)
    cfg = SweepConfig.from_json({"samples": 3, "seed": 42})
    a = run_sweep(cfg)
    b = run_sweep(SweepConfig.from_json({"samples": 3, "seed": 41}))
    assert a != b


def test_sweep_rejects_unknown_fields(tmp_path):
    cfg = _write(tmp_path, "cfg.json", {"samples": 3, "colour": "blue"})
    assert main(["sweep", "--config", cfg]) == 1
    assert main(["sweep", "--samples", "3", "--jobs", "0"]) == 1


def test_sweep_prop4_rows(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--samples", "200", "--seed", "3", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    checked = [r for r in rows if r["n_ede"] != "0" and float(r["c"]) > 0]
    assert len(checked) > 100
    for r in checked:
        assert min(float(r["A"]), float(r["B"]), float(r["C"])) > 0
        assert r["asymptotic"] == "Stable"


def test_simulate_cli(worked_file, tmp_path, capsys):
    out = tmp_path / "traj.csv"
    assert main(["simulate", "--params", worked_file, "--t-end", "50", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["final_infectious_fraction"] == pytest.approx(summary["predicted_infectious_fraction"][0], rel=1e-2)
    assert 0.1 <= summary["ratio_to_eps"] <= 10
    assert out.read_text().splitlines()[0] == "t,X,Y,S,U,N"


def test_simulate_cli_zero_time(worked_file, capsys):
    assert main(["simulate", "--params", worked_file, "--t-end", "0"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 2


def test_simulate_cli_dfe_constant(worked_file, tmp_path, capsys):
    init = _write(tmp_path, "init.json", {"X": 0, "Y": 0, "S": 1, "U": 1, "N": 1})
    assert main(["simulate", "--params", worked_file, "--t-end", "2", "--init", init]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert {(r["X"], r["Y"], r["S"], r["U"], r["N"]) for r in rows} == {("0.0", "0.0", "1.0", "1.0", "1.0")}


def test_simulate_cli_bad_init(worked_file, tmp_path):
    init = _write(tmp_path, "init.json", {"X": 0, "Q": 1})
    assert main(["simulate", "--params", worked_file, "--init", init]) == 1
