import csv
import io
import json

import pytest

from psinv.cli import run
from psinv.experiments import cos_series
from psinv.io import dump_series


def _run(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def geom(tmp_path):
    path = tmp_path / "geom.json"
    path.write_text('{"order": 1, "coeffs": ["1", "-1"]}')
    return str(path)


@pytest.fixture
def quad(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"order": 2, "coeffs": [2, -3, 1]}')
    return str(path)


def test_invert_geometric(geom, capsys):
    code, out, _ = _run(["invert", "--series", geom, "--n", "5"], capsys)
    assert code == 0
    assert [float(r["coeff"]) for r in _rows(out)] == [1.0] * 6


def test_invert_json(geom, capsys):
    code, out, _ = _run(["invert", "--series", geom, "--n", "3", "--out", "json"], capsys)
    assert code == 0 and json.loads(out) == {"order": 3, "coeffs": [1.0, 1.0, 1.0, 1.0]}


def test_deflate_header(quad, capsys):
    code, out, _ = _run(["deflate", "--poly", quad, "--root", "2", "--order", "forward",
                         "--bounds", "--oracle-digits", "100", "--out", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "k,coeff,oracle_coeff,abs_err,rel_err,bound"
    assert float(_rows(out)[0]["coeff"]) == -1.0


def test_quadratic(capsys):
    code, out, _ = _run(["quadratic", "--b", "1.9", "--sign", "plus", "--n", "50", "--bounds"], capsys)
    assert code == 0
    rows = _rows(out)
    assert len(rows) == 51
    assert all(float(r["rel_err"]) <= float(r["rel_bound"]) for r in rows)


def test_bounds_cos_dominance(tmp_path, capsys):
    path = tmp_path / "cos.json"
    dump_series(cos_series(100), path)
    code, out, _ = _run(["bounds", "--series", str(path), "--n", "100", "--which", "thm31"], capsys)
    assert code == 0
    rows = _rows(out)
    assert list(rows[0]) == ["k", "c_k_oracle", "rel_err_binary64", "thm31_rel"]
    even = [r for r in rows if int(r["k"]) % 2 == 0]
    assert all(float(r["rel_err_binary64"]) <= float(r["thm31_rel"]) for r in even)


def test_bounds_all_columns(geom, capsys):
    code, out, err = _run(["bounds", "--series", geom, "--n", "5",
                           "--which", "thm31,cond,stab,infnorm"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "k,c_k_oracle,rel_err_binary64,thm31_rel,cond_rel,stab_rel"
    assert "infnorm" in err


def test_pseudozeros(quad, capsys):
    code, out, _ = _run(["pseudozeros", "--poly", quad, "--rect", "0,2,-1,1", "--res", "3",
                         "--eps", "1e-16,1e-8"], capsys)
    assert code == 0
    rows = _rows(out)
    assert list(rows[0]) == ["re", "im", "indicator"] and len(rows) == 9
    assert float(rows[4]["indicator"]) == 0.0


def test_experiment_fig1a(tmp_path, capsys):
    out_dir = tmp_path / "d"
    code, _, _ = _run(["experiment", "fig1a", "--out", str(out_dir)], capsys)
    assert code == 0
    assert len(list(out_dir.glob("*.csv"))) == 2
    meta = json.loads((out_dir / "fig1a_metadata.json").read_text())
    assert meta["oracle"]["digits"] == 100 and "thresholds" in meta


def test_experiment_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        assert run(["experiment", "fig3", "--variant", "randn", "--seed", "7",
                    "--out", str(tmp_path / d)]) == 0
    capsys.readouterr()
    for name in ("fig3_randn.csv", "fig3_metadata.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    meta = json.loads((tmp_path / "a" / "fig3_metadata.json").read_text())
    assert meta["seed"] == 7 and meta["reports"][0]["generator"].startswith("numpy")


def test_usage_errors(geom, capsys):
    assert run(["bogus"]) == 1
    assert run(["invert", "--series", geom]) == 1
    assert run(["invert", "--series", geom, "--n", "3", "--frobnicate"]) == 1
    code, _, err = _run(["bounds", "--series", geom, "--n", "3", "--oracle-digits", "50"], capsys)
    assert code == 1 and ">= 100" in err


def test_env_digits(geom, capsys, monkeypatch):
    monkeypatch.setenv("PSINV_ORACLE_DIGITS", "60")
    code, _, err = _run(["bounds", "--series", geom, "--n", "3"], capsys)
    assert code == 1 and "100" in err
    monkeypatch.setenv("PSINV_ORACLE_DIGITS", "120")
    assert run(["bounds", "--series", geom, "--n", "3"]) == 0


def test_precondition_error(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text('{"order": 1, "coeffs": [2, 1]}')
    code, _, err = _run(["invert", "--series", str(path), "--n", "3"], capsys)
    assert code == 2 and "normalized" in err


def test_io_errors(tmp_path, capsys):
    code, _, err = _run(["invert", "--series", str(tmp_path / "missing.json"), "--n", "3"], capsys)
    assert code == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err2 = _run(["invert", "--series", str(bad), "--n", "3"], capsys)
    assert code == 3 and err != err2
