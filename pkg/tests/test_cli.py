import json

import pytest

from pulsefront.cli import main
from pulsefront.output import read_csv

PAIR = {"a": {"kind": "reciprocal-sinusoid", "eps": 0.3},
        "mu": {"kind": "sinusoid", "mean": 1.0, "amplitude": 0.5}}


@pytest.fixture
def pair_json(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(PAIR))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gamma_happy_path(capsys, pair_json):
    code, out, _ = run(capsys, "gamma", "--config", pair_json)
    assert code == 0
    for key in ("a_H", "mu_A", "c_hom", "lambda_hom", "gamma", "degenerate"):
        assert f"{key}:" in out


def test_json_output_and_flag_position(capsys, pair_json):
    code, out, _ = run(capsys, "--json", "gamma", "--config", pair_json)
    assert code == 0
    rep = json.loads(out)
    assert rep["c_hom"] == pytest.approx(2.0)
    code, out2, _ = run(capsys, "gamma", "--config", pair_json, "--json")
    assert out2 == out


def test_quiet_and_json_conflict(capsys, pair_json):
    with pytest.raises(SystemExit) as exc:
        main(["--quiet", "--json", "gamma", "--config", pair_json])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["--quiet", "gamma", "--config", pair_json, "--json"])


def test_validation_errors_exit_2(capsys, pair_json):
    code, _, err = run(capsys, "frag", "--L0", "1", "--l", "1.2", "--m", "1")
    assert code == 2 and "InvalidPatchGeometry" in err
    code, _, err = run(capsys, "speed", "--config", pair_json, "--L", "0")
    assert code == 2 and "L must be > 0" in err
    code, _, err = run(capsys, "gamma", "--config", "/nonexistent/pair.json")
    assert code == 2 and err.startswith("error: ValidationError")
    assert len(err.strip().splitlines()) == 1


def test_numerical_failure_exits_3(capsys, pair_json):
    # lam L / n >= 1 makes the discrete operator lose the Metzler property
    code, _, err = run(capsys, "eigen", "--config", pair_json, "--lambda", "100", "--L", "1", "--n", "64")
    assert code == 3 and "PerronFailure" in err


def test_eigen_and_speed(capsys, pair_json, tmp_path):
    out_csv = tmp_path / "phi.csv"
    code, out, _ = run(capsys, "--json", "eigen", "--config", pair_json, "--lambda", "1", "--L", "0.5",
                       "--n", "128", "--out", str(out_csv))
    assert code == 0
    rep = json.loads(out)
    assert rep["k"] == pytest.approx(2.001977374390117, rel=1e-9)
    header, cols = read_csv(out_csv)
    assert header == ["x", "phi"] and len(cols["x"]) == 128
    code, out, _ = run(capsys, "--json", "speed", "--config", pair_json, "--L", "0.5", "--n", "128")
    assert code == 0 and json.loads(out)["c_star"] > 0


def test_sweep_csv_is_deterministic_and_plottable(capsys, pair_json, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code, *_ = run(capsys, "--quiet", "sweep-l", "--config", pair_json, "--l-min", "0.1",
                       "--l-max", "0.4", "--points", "3", "--n", "128", "--out", str(p))
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    header, cols = read_csv(paths[0])
    assert header == ["L", "c_star", "lambda_star", "k_at_min", "n_grid"]
    assert cols["L"] == pytest.approx([0.1, 0.25, 0.4])
    svg = tmp_path / "sweep.svg"
    code, *_ = run(capsys, "plot", str(paths[0]), str(svg), "--x", "L", "--y", "c_star")
    assert code == 0
    first = svg.read_bytes()
    run(capsys, "plot", str(paths[0]), str(svg), "--x", "L", "--y", "c_star")
    assert svg.read_bytes() == first and b"<polyline" in first


def test_plot_errors(capsys, tmp_path):
    csv_path = tmp_path / "t.csv"
    csv_path.write_text("x,y\n0,1\n1,2\n")
    code, _, err = run(capsys, "plot", str(csv_path), str(tmp_path / "o.svg"), "--x", "x", "--y", "w")
    assert code == 2 and "MissingColumn" in err
    empty = tmp_path / "e.csv"
    empty.write_text("")
    code, *_ = run(capsys, "plot", str(empty), str(tmp_path / "o.svg"), "--x", "x", "--y", "y")
    assert code == 2


def test_frag_csv(capsys, tmp_path):
    out = tmp_path / "frag.csv"
    code, text, _ = run(capsys, "--json", "frag", "--L0", "1", "--l", "0.8", "--m", "1",
                        "--z-steps", "5", "--out", str(out))
    assert code == 0
    rep = json.loads(text)
    assert rep["z_min"] == pytest.approx(0.1) and rep["monotone_decreasing"]
    header, cols = read_csv(out)
    assert header == ["z", "c_star", "lambda_star", "k_at_min", "regime_warning"]
    assert cols["regime_warning"] == [0.0] * 5


def test_beta0_and_mean_check(capsys, tmp_path):
    path = tmp_path / "mz.json"
    path.write_text(json.dumps({"a": {"kind": "constant", "value": 1},
                                "mu": {"kind": "sinusoid", "mean": 0, "amplitude": 0.5}}))
    code, out, _ = run(capsys, "--json", "beta0", "--config", str(path))
    assert code == 0 and json.loads(out)["beta"] == pytest.approx(0.0031662869888230555, rel=1e-8)
    code, _, err = run(capsys, "gamma", "--config", str(path))
    assert code == 2 and "NonPositiveMeanGrowth" in err


def test_grid_env_var(capsys, pair_json, monkeypatch):
    monkeypatch.setenv("PULSEFRONT_GRID_N", "128")
    code, out, _ = run(capsys, "--json", "eigen", "--config", pair_json, "--lambda", "0", "--L", "0.5")
    assert code == 0 and json.loads(out)["n"] >= 128
    monkeypatch.setenv("PULSEFRONT_GRID_N", "100")
    code, _, err = run(capsys, "eigen", "--config", pair_json, "--lambda", "0", "--L", "0.5")
    assert code == 2


def test_simulate_compare(capsys, tmp_path):
    path = tmp_path / "flat.json"
    path.write_text(json.dumps({"a": {"kind": "constant", "value": 1},
                                "mu": {"kind": "constant", "value": 1}}))
    code, out, _ = run(capsys, "--json", "simulate", "--config", str(path), "--L", "1",
                       "--t-end", "30", "--dx", "0.1", "--compare")
    assert code == 0
    rep = json.loads(out)
    assert rep["c_star"] == pytest.approx(2.0)
    assert abs(rep["relative_gap"]) < 0.05
