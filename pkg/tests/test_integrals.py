import numpy as np
import pytest

from cutloc import (FormulaOutOfScopeError, InapplicableError, abs2, area,
                    constant, corner_sum, cov_integral, cov_residual,
                    divergence_area_residual, mean_value_residual,
                    minkowski_residual, minkowski_residual_corners, perimeter)
from cutloc.fields import parse_field


def test_circle_perimeter_area(curves):
    curve = curves("circle")
    assert perimeter(curve) == pytest.approx(2 * np.pi, rel=1e-12)
    assert area(curve) == pytest.approx(np.pi, rel=1e-12)


def test_square_perimeter_area(curves):
    curve = curves("square")
    assert perimeter(curve) == pytest.approx(8.0, rel=1e-12)
    assert area(curve) == pytest.approx(4.0, rel=1e-12)


def test_ellipse_perimeter_oracle(curves):
    scipy_special = pytest.importorskip("scipy.special")
    # complete elliptic integral: P = 4 a E(e^2)
    e2 = 1.0 - 0.25
    expect = 4 * 2.0 * scipy_special.ellipe(e2)
    assert perimeter(curves("ellipse")) == pytest.approx(expect, rel=1e-10)
    assert area(curves("ellipse")) == pytest.approx(2 * np.pi, rel=1e-10)


def test_minkowski_smooth(curves):
    for name in ("circle", "ellipse", "fourier"):
        r = minkowski_residual(curves(name))
        assert r.rel_residual <= 1e-6


def test_minkowski_rejects_corners(curves):
    with pytest.raises(InapplicableError):
        minkowski_residual(curves("square"))


def test_minkowski_cornered_square(curves):
    curve = curves("square")
    r = minkowski_residual_corners(curve)
    assert corner_sum(curve) == pytest.approx(-8.0, abs=1e-10)
    assert r.lhs == pytest.approx(8.0, abs=1e-10)
    assert r.rhs == pytest.approx(8.0, abs=1e-10)
    assert r.abs_residual <= 1e-10


def test_corner_terms_vanish_c1(curves):
    assert abs(corner_sum(curves("stadium"))) <= 1e-10
    assert abs(corner_sum(curves("rounded"))) <= 1e-10
    assert minkowski_residual_corners(curves("stadium")).rel_residual <= 1e-8
    assert minkowski_residual_corners(curves("rounded")).rel_residual <= 1e-8


def test_concave_corner_out_of_scope(curves):
    with pytest.raises(FormulaOutOfScopeError):
        minkowski_residual_corners(curves("union"))


def test_cov_integral_disk(curves, tables):
    curve = curves("circle")
    table = tables("circle")
    assert cov_integral(curve, constant(1.0), table=table) == pytest.approx(
        np.pi, abs=1e-6)
    assert cov_integral(curve, abs2(), table=table) == pytest.approx(
        np.pi / 2, abs=1e-6)


def test_cov_integral_ellipse(curves, tables):
    got = cov_integral(curves("ellipse"), constant(1.0),
                       table=tables("ellipse"))
    assert got == pytest.approx(2 * np.pi, abs=5e-4)


def test_cov_integral_square(curves, tables):
    got = cov_integral(curves("square"), constant(1.0),
                       table=tables("square"))
    assert got == pytest.approx(4.0, abs=5e-4)


def test_cov_residual_grid(curves, tables, fields):
    r = cov_residual(curves("circle"), constant(1.0),
                     fields("circle", 1 / 64), table=tables("circle"))
    assert r.rel_residual <= 2e-2


def test_mean_value_identity(curves, tables):
    for name in ("circle", "ellipse", "superellipse", "fourier"):
        r = mean_value_residual(curves(name), table=tables(name))
        assert r.rel_residual <= 1e-5


def test_mean_value_c1_jumpy_phi(curves, tables):
    # kappa jumps at the stadium's C1 junctions, so phi jumps and the
    # sampled average is only first-order accurate in the spacing
    r = mean_value_residual(curves("stadium"), table=tables("stadium"))
    assert r.rel_residual <= 1e-3


def test_mean_value_rejects_concave(curves):
    with pytest.raises(InapplicableError):
        mean_value_residual(curves("union"))


def test_divergence_area_consistency(curves, fields):
    field = fields("ellipse", 1 / 64)
    r = divergence_area_residual(curves("ellipse"), field)
    assert r.abs_residual <= 3 * field.grid.h * perimeter(curves("ellipse"))


def test_parse_field():
    f = parse_field("abs2")
    assert f(np.array([0.5, -0.5])) == pytest.approx(0.5)
    g = parse_field("2.5")
    assert g(np.zeros(2)) == pytest.approx(2.5)
    x = parse_field("x")
    assert x(np.array([1.5, 7.0])) == pytest.approx(1.5)
