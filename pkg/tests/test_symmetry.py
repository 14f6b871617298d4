import numpy as np
import pytest

from cutloc import ConfigurationError, criterion_report, f_max_bruteforce, f_value
from cutloc.symmetry import diameter, inequality_chain_check


def test_f_value_at_all_ones():
    for n in (2, 3, 4):
        x = np.ones(n - 1)
        assert f_value(x) == pytest.approx(1.0 / n, abs=1e-12)


def test_f_value_vanishes_on_face():
    # sum x_j = 0 kills the leading factor
    assert f_value(np.array([1.0, -1.0])) == pytest.approx(0.0, abs=1e-12)


def test_f_max_bruteforce():
    for n in (2, 3, 4):
        mx, arg = f_max_bruteforce(n)
        assert mx == pytest.approx(1.0 / n, abs=1e-4)
        assert np.allclose(arg, 1.0, atol=0.05)


def test_f_max_rejects_bad_inputs():
    with pytest.raises(ConfigurationError):
        f_max_bruteforce(5)
    with pytest.raises(ConfigurationError):
        f_max_bruteforce(3, resolution=50)


def test_circle_verdict(curves, tables):
    rep = criterion_report(curves("circle"), table=tables("circle"))
    assert rep.verdict == "ball"
    assert rep.H_max == pytest.approx(1.0, abs=1e-9)
    assert rep.phi_at_y0 == pytest.approx(0.5, abs=1e-6)
    assert rep.ratio == pytest.approx(0.5, abs=1e-8)
    assert rep.basic_bound_max <= 0.5 + 1e-6
    assert rep.corner_status == "none"
    assert rep.starshaped


def test_ellipse_verdict(curves, tables):
    rep = criterion_report(curves("ellipse"), table=tables("ellipse"))
    assert rep.verdict == "hypotheses-not-met"
    assert np.allclose(rep.y0.position, [2.0, 0.0], atol=1e-3)
    assert rep.phi_at_y0 == pytest.approx(0.25, abs=1e-3)
    assert rep.ratio == pytest.approx(0.6485, abs=1e-3)
    assert rep.hypothesis_H
    assert not rep.hypothesis_phi
    assert "phi" in rep.note


def test_square_verdict(curves, tables):
    rep = criterion_report(curves("square"), table=tables("square"))
    assert rep.corner_status == "convex-only"
    assert rep.verdict == "hypotheses-not-met"


def test_union_verdict_counterexample(curves, tables):
    rep = criterion_report(curves("union"), table=tables("union"))
    assert rep.verdict == "inapplicable"
    assert rep.corner_status == "concave-present"
    assert rep.phi_constancy <= 1e-3
    assert "constant" in rep.note


def test_displaced_circle_not_starshaped():
    from cutloc import from_spec
    curve = from_spec({"type": "circle", "radius": 1.0, "center": [2.0, 0.0]})
    rep = criterion_report(curve, samples=512)
    assert not rep.starshaped
    assert rep.verdict == "inapplicable"
    assert "starshaped" in rep.note


def test_too_few_samples_rejected(curves):
    with pytest.raises(ConfigurationError):
        criterion_report(curves("circle"), samples=32)


def test_diameter(curves):
    assert diameter(curves("circle")) == pytest.approx(2.0, rel=1e-4)
    assert diameter(curves("ellipse")) == pytest.approx(4.0, rel=1e-4)


def test_chain_on_circle(curves, tables):
    chk = inequality_chain_check(curves("circle"), table=tables("circle"))
    assert chk.first_failure is None
    assert chk.link1_ok and chk.link2_ok and chk.link3_ok
    assert chk.phi_H_y0 <= chk.bound + 1e-9
    # all three chain quantities coincide on the ball
    assert np.allclose(chk.term_ratio_H, chk.phi_H_y0, atol=1e-6)


def test_chain_on_ellipse(curves, tables):
    chk = inequality_chain_check(curves("ellipse"), table=tables("ellipse"))
    # the phi(y0) >= ratio link is what breaks for the ellipse
    assert chk.first_failure == "phi(y0) below ratio"
