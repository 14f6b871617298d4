"""Boundary and bulk integral identities.

Perimeter and area by adaptive quadrature, the curvature integral identity
(smooth and cornered forms), the change of variables over inward normal
rays, and the mean-value identity for the criterion function phi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cutlocus import cut_table
from .errors import FormulaOutOfScopeError, InapplicableError
from .quadrature import simpson_doubling_vec

__all__ = [
    "IntegralReport", "ROT_CCW", "perimeter", "area", "minkowski_residual",
    "minkowski_residual_corners", "corner_sum", "cov_integral",
    "cov_integral_detail", "cov_residual", "mean_value_residual",
    "divergence_area_residual",
]

_EPS_REL = 1e-14

# Counterclockwise quarter turn; the corner term sign assumes CCW orientation.
ROT_CCW = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class IntegralReport:
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    samples_used: int

    @staticmethod
    def from_pair(lhs, rhs, samples_used):
        lhs = float(lhs)
        rhs = float(rhs)
        ab = abs(lhs - rhs)
        return IntegralReport(lhs=lhs, rhs=rhs, abs_residual=ab,
                              rel_residual=ab / max(abs(rhs), _EPS_REL),
                              samples_used=int(samples_used))


# ------------------------------------------------------------ arc quadrature

def _arc_batch_integral(curve, rowfun, tol):
    """Sum over arcs of the doubling-Simpson integral of rowfun(arc, t).

    Returns (value, node_count).  rowfun maps (arc, (k,) params) -> (k,).
    """
    arcs = curve.arcs
    a = np.array([arc.t0 for arc in arcs], dtype=float)
    b = np.array([arc.t1 for arc in arcs], dtype=float)
    count = [0]

    def f(tmat):
        count[0] += tmat.size
        out = np.empty_like(tmat)
        for i, arc in enumerate(arcs):
            out[i] = rowfun(arc, tmat[i])
        return out

    vals = simpson_doubling_vec(f, a, b, tol=tol)
    return float(np.sum(vals)), count[0]


def _speed_row(arc, t):
    return np.linalg.norm(arc.velocity(t), axis=-1)


def _shoelace_row(arc, t):
    # <y, nu> ds = (x y' - y x') dt for a CCW curve
    p = arc.point(t)
    v = arc.velocity(t)
    return p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0]


def _curvature_support_row(arc, t):
    v = arc.velocity(t)
    acc = arc.acceleration(t)
    p = arc.point(t)
    speed2 = v[:, 0] ** 2 + v[:, 1] ** 2
    kappa_speed = (v[:, 0] * acc[:, 1] - v[:, 1] * acc[:, 0]) / speed2
    return kappa_speed * (p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0]) / np.sqrt(speed2)


def perimeter(curve, tol=None):
    """Boundary length by per-arc adaptive quadrature of |Y'|."""
    if tol is None:
        tol = 1e-10 * max(1.0, curve.extent)
    val, _ = _arc_batch_integral(curve, _speed_row, tol)
    return val


def area(curve, tol=None):
    """Enclosed area via the divergence theorem, (1/2) oint <y, nu> ds."""
    if tol is None:
        tol = 1e-10 * max(1.0, curve.extent) ** 2
    val, _ = _arc_batch_integral(curve, _shoelace_row, tol)
    return 0.5 * val


# -------------------------------------------------------- curvature integral

def minkowski_residual(curve, tol=None):
    """Report for oint kappa <y, nu> ds = |boundary| on smooth curves."""
    if curve.detect_corners():
        raise InapplicableError(
            "curve has corners; use minkowski_residual_corners")
    if tol is None:
        tol = 1e-10 * max(1.0, curve.extent)
    lhs, n1 = _arc_batch_integral(curve, _curvature_support_row, tol)
    rhs, n2 = _arc_batch_integral(curve, _speed_row, tol)
    return IntegralReport.from_pair(lhs, rhs, n1 + n2)


def _junction_normals(curve):
    """Per junction: position, outgoing-normal jump nu_plus - nu_minus."""
    arcs = curve.arcs
    n = len(arcs)
    pos = np.empty((n, 2))
    dnu = np.empty((n, 2))
    for j in range(n):
        cur, nxt = arcs[j], arcs[(j + 1) % n]
        v0 = np.asarray(cur.velocity(np.array([cur.t1])))[0]
        v1 = np.asarray(nxt.velocity(np.array([nxt.t0])))[0]
        t0 = v0 / np.linalg.norm(v0)
        t1 = v1 / np.linalg.norm(v1)
        pos[j] = np.asarray(cur.point(np.array([cur.t1])))[0]
        dnu[j] = (np.array([t1[1], -t1[0]]) - np.array([t0[1], -t0[0]]))
    return pos, dnu


def corner_sum(curve):
    """sum_i <y_i, R (nu_plus - nu_minus)> over every arc junction.

    C1 junctions contribute ~0; the value is the corner correction of the
    cornered curvature-integral identity.
    """
    pos, dnu = _junction_normals(curve)
    rotated = dnu @ ROT_CCW.T
    return float(np.sum(pos * rotated))


def minkowski_residual_corners(curve, tol=None):
    """Cornered identity: |boundary| = oint kappa <y,nu> ds - corner sum."""
    corners = curve.detect_corners()
    if any(not c.convex for c in corners):
        raise FormulaOutOfScopeError(
            "concave corner present; the cornered identity is out of scope")
    if tol is None:
        tol = 1e-10 * max(1.0, curve.extent)
    smooth_part, n1 = _arc_batch_integral(curve, _curvature_support_row, tol)
    lhs = smooth_part - corner_sum(curve)
    rhs, n2 = _arc_batch_integral(curve, _speed_row, tol)
    return IntegralReport.from_pair(lhs, rhs, n1 + n2)


# --------------------------------------------------- normal-ray bulk integral

def _midpoint_table(curve, n, projector=None, tol=None):
    """Cut table over the composite-midpoint arclength sampling."""
    L = curve.length
    s = (np.arange(n) + 0.5) * (L / n)
    geom = curve.geometry_at_s(s)
    return cut_table(curve, projector=projector, tol=tol, samples=geom)


def _require_no_concave(curve):
    if any(not c.convex for c in curve.detect_corners()):
        raise FormulaOutOfScopeError(
            "concave corner present; the ray change of variables is not "
            "available")


def cov_integral_detail(curve, h, n=2048, table=None, projector=None,
                        tol=1e-10):
    """(value, coverage_deficit, samples) for int_Omega h over normal rays.

    Outer composite midpoint in arclength, inner doubling Simpson in t with
    the 1 - t kappa Jacobian weight.  Rays in corner zones are skipped; the
    deficit reports their arclength fraction.
    """
    _require_no_concave(curve)
    n = max(int(n), 1024)
    if table is None:
        table = _midpoint_table(curve, n, projector=projector)
    else:
        n = len(table)
    pos = table.position
    nu = table.normal
    kap = table.kappa
    lam = table.lam

    def f(tmat):
        x = pos[:, None, :] - tmat[..., None] * nu[:, None, :]
        return np.asarray(h(x)) * (1.0 - tmat * kap[:, None])

    inner = simpson_doubling_vec(f, np.zeros(n), lam, tol=tol)
    ds = curve.length / n
    value = float(np.sum(inner * ds))
    deficit = float(np.count_nonzero(table.corner_zone)) / n
    return value, deficit, n


def cov_integral(curve, h, n=2048, table=None, projector=None, tol=1e-10):
    """int_Omega h via the normal-ray change of variables (value only)."""
    value, _, _ = cov_integral_detail(curve, h, n=n, table=table,
                                      projector=projector, tol=tol)
    return value


def cov_residual(curve, h, field, n=2048, table=None):
    """Ray-side integral of h against its grid quadrature over inside cells."""
    lhs, _, _ = cov_integral_detail(curve, h, n=n, table=table)
    centers = field.grid.centers()
    vals = np.asarray(h(centers)).reshape(field.inside.shape)
    rhs = float(np.sum(vals[field.inside]) * field.grid.h ** 2)
    return IntegralReport.from_pair(lhs, rhs, int(np.sum(field.inside)))


def mean_value_residual(curve, n=2048, table=None, projector=None):
    """Arclength average of phi against |Omega| / |boundary|."""
    _require_no_concave(curve)
    if table is None:
        table = _midpoint_table(curve, max(int(n), 1024), projector=projector)
    lhs = float(np.mean(table.phi))
    rhs = area(curve) / perimeter(curve)
    return IntegralReport.from_pair(lhs, rhs, len(table))


def divergence_area_residual(curve, field):
    """Quadrature area against the grid cell-count area."""
    lhs = area(curve)
    rhs = float(np.sum(field.inside)) * field.grid.h ** 2
    return IntegralReport.from_pair(lhs, rhs, int(np.sum(field.inside)))
