import json
import os

import numpy as np
import pytest

from cutloc.cli import main, render_json

CIRCLE = '{"type": "circle", "radius": 1.0}'
SQUARE = '{"type": "square", "side": 2.0}'
UNION = '{"type": "union_disks", "radius": 2.0, "half_distance": 1.0}'


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_shapes_listing(capsys):
    code, out, _ = _run(capsys, ["shapes"])
    assert code == 0
    assert "circle" in out and "union_disks" in out


def test_shapes_json(capsys):
    code, out, _ = _run(capsys, ["shapes", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert "ellipse" in doc


def test_shapes_unknown_name(capsys):
    code, _, err = _run(capsys, ["shapes", "blob"])
    assert code == 2
    assert "unknown shape" in err


def test_report_circle(capsys):
    code, out, _ = _run(capsys, ["report", "--shape", CIRCLE,
                                 "--samples", "256"])
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "ball"
    assert doc["assertions"]["kappa_lambda_bound_ok"]


def test_report_writes_files(capsys, tmp_path):
    out_dir = str(tmp_path / "run")
    code, out, _ = _run(capsys, ["report", "--shape", CIRCLE,
                                 "--samples", "256", "--out", out_dir])
    assert code == 0
    assert os.path.exists(os.path.join(out_dir, "report.json"))
    csv_path = os.path.join(out_dir, "samples.csv")
    assert os.path.exists(csv_path)
    with open(csv_path) as fh:
        header = fh.readline().strip()
    assert header.startswith("s,x,y,")
    with open(os.path.join(out_dir, "report.json")) as fh:
        assert fh.read() == out


def test_report_json_format_only(capsys, tmp_path):
    out_dir = str(tmp_path / "jsononly")
    code, _, _ = _run(capsys, ["report", "--shape", CIRCLE, "--samples",
                               "256", "--out", out_dir, "--format", "json"])
    assert code == 0
    assert os.path.exists(os.path.join(out_dir, "report.json"))
    assert not os.path.exists(os.path.join(out_dir, "samples.csv"))


def test_verify_square(capsys):
    code, out, _ = _run(capsys, ["verify", "--shape", SQUARE, "--samples",
                                 "512", "--grid-nx", "64", "--grid-ny", "64"])
    assert code == 0
    recs = {r["name"]: r for r in json.loads(out)}
    assert recs["minkowski-smooth"]["status"] == "skipped"
    assert recs["minkowski-cornered"]["status"] == "pass"
    assert recs["minkowski-cornered"]["corner_sum"] == pytest.approx(-8.0)
    assert recs["kappa-lambda-bound"]["status"] == "pass"


def test_verify_union_out_of_scope(capsys):
    code, out, _ = _run(capsys, ["verify", "--shape", UNION,
                                 "--samples", "512"])
    assert code == 0
    recs = {r["name"]: r for r in json.loads(out)}
    assert recs["minkowski-cornered"]["status"] == "out-of-scope"
    assert recs["chv-grid"]["status"] == "skipped"


def test_mk_summary(capsys):
    code, out, _ = _run(capsys, ["mk", "--shape", CIRCLE, "--samples", "512",
                                 "--grid-nx", "96", "--grid-ny", "96",
                                 "--gamma", "2.0"])
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "ball"
    assert doc["boundary_trace"]["mean"] == pytest.approx(1.0, abs=1e-4)
    assert doc["residual"]["median"] <= 0.05 * 2.0


def test_web_report(capsys):
    code, out, _ = _run(capsys, ["web", "--shape", CIRCLE, "--samples",
                                 "512", "--operator", "plap:4"])
    assert code == 0
    doc = json.loads(out)
    assert doc["identity_status"] == "pass"
    assert doc["hprime0"] == pytest.approx(-0.5 ** (1 / 3), abs=1e-9)


def test_web_gamma_arc_violation(capsys):
    code, out, _ = _run(capsys, ["web", "--shape",
                                 '{"type": "ellipse", "a": 2.0, "b": 1.0}',
                                 "--samples", "512", "--gamma-arc=1.9,2.9"])
    assert code == 1
    doc = json.loads(out)
    assert doc["identity_status"].startswith("hypothesis-violation")


def test_exit_2_on_bad_config(capsys):
    assert _run(capsys, ["report", "--shape", CIRCLE, "--tol", "0.5"])[0] == 2
    assert _run(capsys, ["report", "--shape", "nope.json"])[0] == 2
    assert _run(capsys, ["report", "--shape", CIRCLE,
                         "--format", "xml"])[0] == 2
    assert _run(capsys, ["report", "--shape", '{"radius": 1.0}'])[0] == 2
    assert _run(capsys, ["mk", "--shape", CIRCLE, "--gamma", "-1"])[0] == 2


def test_exit_2_on_bad_json_file(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"type": "circle"')
    code, _, err = _run(capsys, ["report", "--shape", str(p)])
    assert code == 2
    assert "line" in err


def test_stdout_bytes_deterministic(capsys):
    argv = ["report", "--shape", CIRCLE, "--samples", "256"]
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second


def test_render_json_float_format():
    text = render_json({"x": 1.0 / 3.0, "flags": [True, False, None],
                        "n": 7, "bad": float("nan")})
    doc = json.loads(text)
    assert doc["x"] == 1.0 / 3.0  # 17 significant digits round-trips
    assert doc["flags"] == [True, False, None]
    assert doc["bad"] is None
    assert "0.33333333333333331" in text


def test_render_json_numpy_values():
    text = render_json({"a": np.float64(0.5), "b": np.int64(3),
                        "c": np.array([1.0, 2.0])})
    assert json.loads(text) == {"a": 0.5, "b": 3, "c": [1.0, 2.0]}
