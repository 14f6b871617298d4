import numpy as np
import pytest

from cutloc import (HypothesisViolationError, build_distance_field,
                    complementarity_max, constant, mk_verdict,
                    residual_summary, vf_at, vf_boundary, vf_field,
                    weak_form_check)
from cutloc.distfield import GridSpec
from cutloc.mk import export_mk_csv


def test_vf_at_disk_closed_form(curves):
    curve = curves("circle")
    # v = |x| / 2 away from the center
    for x, expect in (((0.5, 0.0), 0.25), ((0.0, -0.8), 0.4),
                      ((0.3, 0.4), 0.25)):
        got = vf_at(curve, np.array(x))
        assert not got.singular
        assert got.value == pytest.approx(expect, abs=1e-9)


def test_vf_at_center_is_singular(curves):
    got = vf_at(curves("circle"), np.zeros(2))
    assert got.singular
    assert got.value == 0.0


def test_vf_boundary_is_gamma_phi(curves, tables):
    curve = curves("circle")
    assert vf_boundary(curve, 0.0).value == pytest.approx(0.5, abs=1e-9)
    assert vf_boundary(curve, 0.0, f=constant(3.0)).value == pytest.approx(
        1.5, abs=1e-9)
    ell = curves("ellipse")
    assert vf_boundary(ell, 0.0).value == pytest.approx(0.25, abs=1e-6)


def test_vf_field_disk_oracle(curves, tables, fields):
    curve = curves("circle")
    sol = vf_field(curve, field=fields("circle", 1 / 64),
                   table=tables("circle"))
    grid = sol.grid
    xs, ys = np.meshgrid(grid.xs, grid.ys)
    rr = np.hypot(xs, ys)
    mask = sol.inside & ~sol.singular
    err = np.abs(sol.v - rr / 2)[mask]
    assert np.max(err) <= 3 * grid.h
    assert np.min(sol.v) >= 0.0


def test_vf_field_square_tau(curves, tables, fields):
    # on the square v_f with gamma = 1 integrates 1 along straight rays: v = tau
    sol = vf_field(curves("square"), field=fields("square", 1 / 64),
                   table=tables("square"))
    mask = sol.inside & ~sol.singular
    assert np.max(np.abs(sol.v - sol.tau)[mask]) <= 1e-6


def test_residual_and_complementarity(curves, tables, fields):
    sol = vf_field(curves("circle"), field=fields("circle", 1 / 64),
                   table=tables("circle"))
    med, mx, l1 = residual_summary(sol)
    assert med <= 0.05
    assert complementarity_max(sol) <= 5 * sol.h * float(np.max(sol.v))


def test_weak_form(curves, tables, fields):
    sol = vf_field(curves("circle"), field=fields("circle", 1 / 64),
                   table=tables("circle"))
    recs = weak_form_check(sol)
    for rec in recs:
        assert rec["abs_err"] <= 0.05 * max(1.0, abs(rec["rhs"]))


def test_mk_verdicts(curves, tables):
    rep, trace_err = mk_verdict(curves("circle"), table=tables("circle"))
    assert rep.verdict == "ball"
    assert trace_err <= 1e-6
    rep, _ = mk_verdict(curves("ellipse"), table=tables("ellipse"))
    assert rep.verdict == "hypotheses-not-met"
    rep, _ = mk_verdict(curves("union"), table=tables("union"))
    assert rep.verdict == "inapplicable"


def test_mk_gamma_must_be_positive(curves):
    with pytest.raises(HypothesisViolationError):
        mk_verdict(curves("circle"), gamma=0.0)


def test_export_csv(tmp_path, curves, tables, fields):
    sol = vf_field(curves("circle"), field=fields("circle", 1 / 64),
                   table=tables("circle"))
    path = tmp_path / "mk.csv"
    export_mk_csv(sol, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,u,v,tau,residual,singular"
    assert len(lines) == 1 + sol.grid.nx * sol.grid.ny
    first = lines[1].split(",")
    assert len(first) == 7
    assert first[6] in ("0", "1")
