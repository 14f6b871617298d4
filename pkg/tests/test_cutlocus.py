import numpy as np
import pytest

from cutloc import cut_table, cut_value, focal_check, max_lambda_kappa, phi
from cutloc.cutlocus import lambda_lipschitz
from cutloc.distfield import FieldProjector


def test_phi_closed_form():
    assert phi(1.0, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert phi(0.5, 2.0) == pytest.approx(0.25, abs=1e-15)
    assert phi(1.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    # concave side: 1 - t*kappa > 1 grows the integrand
    assert phi(1.0, -1.0) == pytest.approx(1.5, abs=1e-15)


def test_circle_cut_values(tables):
    table = tables("circle")
    assert np.allclose(table.lam, 1.0, atol=2e-6)
    assert np.allclose(table.phi, 0.5, atol=2e-6)
    assert np.allclose(table.lambda_kappa, 1.0, atol=2e-6)


def test_ellipse_vertices(curves):
    curve = curves("ellipse")
    lam_major = cut_value(curve, 0.0)
    assert lam_major == pytest.approx(0.5, abs=1e-5)
    # minor vertex: normal ray ends at the origin on the cut segment
    s = np.linspace(0.0, curve.length, 4097)
    g = curve.geometry_at_s(s)
    s_minor = s[np.argmax(g.position[:, 1])]
    lam_minor = cut_value(curve, float(s_minor))
    assert lam_minor == pytest.approx(1.0, abs=1e-4)


def test_ellipse_phi_range(tables):
    table = tables("ellipse")
    assert np.min(table.phi) == pytest.approx(0.25, abs=1e-3)
    assert np.max(table.phi) == pytest.approx(0.875, abs=1e-3)


def _corner_distance(table, curve):
    s_corners = curve.corner_arclengths()
    d = np.abs(table.s[:, None] - s_corners[None, :]) % curve.length
    d = np.minimum(d, curve.length - d)
    return np.min(d, axis=1)


def test_square_cut_profile(tables, curves):
    curve = curves("square")
    table = tables("square")
    keep = _corner_distance(table, curve) > 5.0 * table.accept
    # lambda = distance to the nearest diagonal = 1 - |coordinate along side|
    along = np.where(np.abs(table.position[:, 0]) < 1.0 - 1e-9,
                     np.abs(table.position[:, 0]),
                     np.abs(table.position[:, 1]))
    expect = 1.0 - along
    assert np.max(np.abs(table.lam[keep] - expect[keep])) <= 1e-3
    assert np.allclose(table.phi[keep], table.lam[keep], atol=1e-12)


def test_square_corner_zone(curves):
    # the uniform resampler shifts nodes off corners, so place samples
    # exactly at the four corner arclengths to exercise the zone flag
    curve = curves("square")
    geom = curve.geometry_at_s(curve.corner_arclengths())
    table = cut_table(curve, samples=geom)
    assert np.all(table.corner_zone)
    assert np.all(table.lam == 0.0)
    assert np.all(table.phi == 0.0)


def test_stadium_cut_values(tables):
    table = tables("stadium")
    smooth = table.smooth()
    assert np.allclose(table.lam[smooth], 1.0, atol=2e-4)
    caps = smooth & (table.kappa > 0.5)
    flats = smooth & (table.kappa < 0.5)
    assert np.allclose(table.phi[caps], 0.5, atol=2e-4)
    assert np.allclose(table.phi[flats], 1.0, atol=2e-4)


def test_union_smooth_part(tables, curves):
    curve = curves("union")
    table = tables("union")
    keep = table.smooth() & (_corner_distance(table, curve)
                             > 5.0 * table.accept)
    assert np.allclose(table.lam[keep], 2.0, atol=1e-3)
    assert np.allclose(table.kappa[keep], 0.5, atol=1e-9)
    assert np.allclose(table.phi[keep], 1.0, atol=1e-3)


def test_lambda_kappa_bound(tables):
    for name in ("circle", "ellipse", "square", "stadium", "union",
                 "superellipse", "rounded", "fourier"):
        assert max_lambda_kappa(tables(name)) <= 1.0 + 1e-6


def test_focal_identity_smooth(curves):
    for name in ("circle", "ellipse", "superellipse", "fourier"):
        assert focal_check(curves(name)) <= 1e-3


def test_field_projector_cut_agreement(curves, fields):
    curve = curves("ellipse")
    field = fields("ellipse", 1 / 128)
    proj = FieldProjector(field)
    exact = cut_table(curve, n=128)
    approx = cut_table(curve, n=128, projector=proj)
    err = np.abs(exact.lam - approx.lam)
    assert np.max(err) <= 5 * field.grid.h


def test_lambda_lipschitz_diagnostic(tables):
    # kappa*lambda < 1 region: lambda is locally Lipschitz; the table
    # difference quotients stay bounded on the smooth part of the ellipse
    table = tables("ellipse")
    rate = lambda_lipschitz(table)
    assert np.isfinite(rate)
    assert rate < 50.0
