import csv
import json
import pickle

import numpy as np
import pytest

from relqfi import cli, sweeps
from relqfi.errors import InvalidParameters, NonConvergence
from relqfi.sweeps import SweepPointError, SweepRequest, parse_values, run_sweep, to_csv


def _rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(body))
    return rows[0], np.array(rows[1:], dtype=float)


def test_sweep_csv_to_stdout(capsys):
    assert cli.main(["sweep", "omega_vs_lambda", "--kappa", "1", "--velocity", "1", "--lambda", "0.01:0.99:99"]) == 0
    text = capsys.readouterr().out
    assert "# library: relqfi" in text and "# model_quadrature:" in text and "# kernel_backend:" in text
    header, data = _rows(text)
    assert header[:4] == ["m_kappa [1]", "velocity [1]", "lambda [1]", "omega [1/E^2]"]
    w = data[:, 3]
    assert np.all(np.diff(w) < 0)
    assert np.count_nonzero(np.diff(np.sign(w)) != 0) == 1


def test_sweep_is_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"s{k}.csv"
        assert cli.main(["sweep", "lambda_star_vs_V", "--kappa", "0.1,0.5,1,2", "--velocity", "0.001:1:12",
                         "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    _, data = _rows(outs[0].decode())
    # lambda* vanishes as V -> 0 for every spread
    assert np.all(data[data[:, 1] == 0.001][:, 2] < 1e-2)


def test_jobs_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "omega0_vs_kappa", "--kappa", "0.05:3:7", "--velocity", "0.9,1"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_mass_scales_kappa(capsys):
    assert cli.main(["sweep", "lambda_star_vs_V", "--mass", "2", "--kappa", "0.5", "--velocity", "1"]) == 0
    _, d2 = _rows(capsys.readouterr().out)
    assert cli.main(["sweep", "lambda_star_vs_V", "--kappa", "1", "--velocity", "1"]) == 0
    _, d1 = _rows(capsys.readouterr().out)
    assert d1[0, 0] == d2[0, 0] == 1.0 and d1[0, 2] == d2[0, 2]


def test_json_and_svg(capsys):
    assert cli.main(["sweep", "peak_radius", "--kappa", "1", "--velocity", "0.5,1", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["quantity"] == "peak_radius" and obj["units"]["peak_radius"] == "1/E"
    assert len(obj["columns"]["peak_radius"]) == 2
    assert obj["columns"]["peak_radius"][0] < obj["columns"]["peak_radius"][1]
    assert cli.main(["sweep", "lambda_star_vs_V", "--kappa", "0.5,1", "--velocity", "0.1:1:5", "--format", "svg"]) == 0
    svg = capsys.readouterr().out
    assert svg.startswith("<svg") and svg.count("<polyline") == 2 and "lambda_star" in svg


def test_usage_errors(capsys):
    assert cli.main(["sweep", "omega_vs_lambda", "--velocity", "1.5"]) == 2
    assert "velocities must lie in [0, 1]" in capsys.readouterr().err
    assert cli.main(["sweep", "omega_vs_lambda", "--kappa", "a,b"]) == 2
    assert cli.main(["sweep", "peak_radius", "--velocity", "0"]) == 2
    assert cli.main(["oracle", "--lambda", "1"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "not_a_quantity"])
    assert exc.value.code == 2


def test_numerical_failure_exit_code(monkeypatch, capsys):
    def fail(params, spec=None):
        raise NonConvergence("quadrature did not converge")

    monkeypatch.setattr(sweeps, "zeta_xi", fail)
    assert cli.main(["sweep", "lambda_star_vs_V", "--kappa", "0.7", "--velocity", "0.3"]) == 3
    err = capsys.readouterr().err
    assert "NonConvergence" in err and "'m_kappa': 0.7" in err and "'velocity': 0.3" in err


def test_sweep_point_error_pickles():
    e = SweepPointError({"m_kappa": 1.0}, NonConvergence("x"))
    e2 = pickle.loads(pickle.dumps(e))
    assert str(e2) == str(e) and e2.point == {"m_kappa": 1.0}


def test_verify_exit_codes(tmp_path, capsys):
    assert cli.main(["verify", "--level", "fast"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and rep["level"] == "fast"
    assert {"identity_residual_grid", "omega_monotone_failures"} <= {c["name"] for c in rep["checks"]}
    out = tmp_path / "v.json"
    assert cli.main(["verify", "--level", "full", "--out", str(out)]) == 0
    names = {c["name"] for c in json.loads(out.read_text())["checks"]}
    assert "reduced_model_vs_analytic_fim" in names
    assert cli.main(["verify", "--inject-failure", "fim_times_inverse"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert not rep["passed"]


def test_oracle(capsys):
    assert cli.main(["oracle", "--kappa", "1", "--velocity", "0.5", "--lambda", "0,0.5", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert max(obj["relative_frobenius_error"]) < 1e-6
    assert obj["rank"] == [2, 2]


def test_figures_with_svg(tmp_path, monkeypatch):
    small = {q: dict(d) for q, d in sweeps.DEFAULTS.items()}
    small["peak_radius"]["velocities"] = [0.5, 1.0]
    small["lambda_star_vs_V"]["velocities"] = [0.5, 1.0]
    small["omega0_vs_kappa"]["kappa_primes"] = [0.1, 1.0, 5.0]
    monkeypatch.setattr(sweeps, "DEFAULTS", small)
    assert cli.main(["figures", "--outdir", str(tmp_path), "--svg", "--log-level", "INFO"]) == 0
    for stem in ("fig1", "fig3", "fig4", "fig5"):
        assert (tmp_path / f"{stem}.csv").exists() and (tmp_path / f"{stem}.svg").exists()


def test_request_defaults_and_validation():
    r = SweepRequest("omega_vs_lambda")
    assert r.kappa_primes == (1.0,) and r.velocities == (1.0,) and len(r.lambdas) == 99
    with pytest.raises(InvalidParameters):
        SweepRequest("omega_vs_lambda", mass=0.0)
    with pytest.raises(InvalidParameters):
        SweepRequest("bogus")
    table = run_sweep(SweepRequest("lambda_star_vs_V", kappa_primes=(1.0,), velocities=(0.5,)))
    assert table.column("lambda_star")[0] > 0
    assert to_csv(table) == to_csv(table)


def test_parse_values():
    assert parse_values("1,2.5") == [1.0, 2.5]
    assert parse_values("0:1:5") == [0.0, 0.25, 0.5, 0.75, 1.0]
    for bad in ("", "1:2", "0:1:0", "x"):
        with pytest.raises(InvalidParameters):
            parse_values(bad)
