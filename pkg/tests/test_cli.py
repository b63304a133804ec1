import csv
import io
import json

import pytest

from sublorentz.cli import main


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_dist_csv(capsys):
    assert main(["dist", "2", "0", "0"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == [
        "x,y,z,membership,d,lower_bound,upper_bound,w,p,reduced_precision",
        "2,0,0,Interior,2,2,2,0,0,False",
    ]


def test_dist_on_beak(capsys):
    assert main(["dist", "2", "0", "1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["regime"] == "LightlikeBoundary"
    assert doc["data"][0]["d"] == 0.0
    assert doc["data"][0]["membership"] == "Boundary"


def test_dist_unreachable(capsys):
    assert main(["dist", "0", "1", "0"]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "outside J+" in captured.err


def test_bad_arguments():
    with pytest.raises(SystemExit) as excinfo:
        main(["dist", "two", "0", "0"])
    assert excinfo.value.code == 1


def test_exp_json_meta(capsys):
    assert main(["exp", "0", "0", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["command"] == "exp"
    assert doc["meta"]["parameters"] == {"psi": 0.0, "c": 0.0, "t": 2.0}
    assert doc["data"] == [{"psi": 0.0, "c": 0.0, "t": 2.0, "x": 2.0, "y": 0.0, "z": 0.0}]


def test_invexp(capsys):
    assert main(["invexp", "2", "0", "0"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert float(row["t"]) == 2.0
    assert float(row["residual"]) == 0.0


def test_invexp_not_interior():
    assert main(["invexp", "2", "0", "1"]) == 2


def test_maximizer_rows(capsys):
    assert main(["maximizer", "2", "0", "1", "--samples", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [r["kind"] for r in rows] == ["LightlikeBroken"] * 3
    coords = [tuple(float(r[k]) for k in ("t", "x", "y", "z")) for r in rows]
    assert coords == [(0, 0, 0, 0), (1, 1, -1, 0), (2, 2, 0, 1)]


def test_maximizer_json_parameters(capsys):
    assert main(["maximizer", "2", "0", "1", "--samples", "3", "--format", "json"]) == 0
    meta = json.loads(capsys.readouterr().out)["meta"]
    assert meta["trajectory"] == {"order": "MinusThenPlus", "tau1": 1.0, "tau2": 1.0}
    assert meta["length"] == 0.0


def test_output_is_deterministic(capsys):
    main(["maximizer", "3", "1", "0.5", "--samples", "7"])
    first = capsys.readouterr().out
    main(["maximizer", "3", "1", "0.5", "--samples", "7"])
    assert capsys.readouterr().out == first


def test_dist_grid(capsys):
    assert main(["dist-grid", "--plane", "z=0", "--urange", "-1", "1", "--vrange", "-1", "1",
                 "--grid", "3", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 9
    assert rows[5]["d"] == "1"
    assert rows[3]["d"] == "nan"


def test_dist_grid_bad_grid():
    assert main(["dist-grid", "--grid", "1", "3"]) == 1


def test_sphere_mesh(capsys):
    assert main(["sphere", "--R", "1", "--grid", "3", "3", "--yrange", "-1", "1",
                 "--zrange", "-1", "1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 9
    assert (rows[4]["iy"], rows[4]["iz"], rows[4]["x"]) == ("1", "1", "1")


def test_sphere_quads(capsys):
    assert main(["sphere", "--grid", "3", "3", "--quads"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [r["v2"] for r in rows] == ["4", "5", "7", "8"]


def test_sphere_strata(capsys):
    assert main(["sphere", "--R", "0", "--grid", "3", "3", "--strata"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[4]["stratum"] == "origin"
    assert rows[0]["stratum"] == "z<0"


def test_sphere_strata_needs_zero_radius():
    assert main(["sphere", "--R", "1", "--strata"]) == 1


def test_sphere_section(capsys):
    assert main(["sphere", "--R", "1", "--section", "z=0", "--samples", "5"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 5
    assert {r["branch"] for r in rows} == {"0"}


def test_sphere_empty_section():
    assert main(["sphere", "--R", "1", "--section", "x=0.5"]) == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "exp.csv"
    assert main(["exp", "0", "0", "2", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text().startswith("psi,c,t,x,y,z\n")
