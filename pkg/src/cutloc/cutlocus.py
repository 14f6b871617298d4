"""Cut values along inward normals and the criterion function phi.

The cut value lambda(y) = sup{t >= 0 : the nearest boundary point of
y - t nu(y) is y} is found by bisection on that predicate; the bracket is
capped at 1/kappa(y) for convex samples (the curvature bound makes the cap
a valid upper end, and returning the cap when the predicate still holds
there gives the focal identity kappa lambda = 1 exactly).  phi(y) is the
depth integral of (1 - t kappa) over [0, lambda]; in the plane it has the
closed form lambda - lambda^2 kappa / 2.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .boundary import BoundaryPoint
from .errors import DegenerateRayError, InapplicableError
from .projector import CurveProjector, cyclic_dist
from .quadrature import adaptive_simpson

__all__ = [
    "CutSample",
    "CutTable",
    "NormalRayChart",
    "cut_predicate",
    "cut_table",
    "cut_value",
    "phi",
    "phi_general",
    "max_lambda_kappa",
    "focal_check",
    "lambda_lipschitz",
    "build_ray_chart",
    "chart_report",
    "export_cut_csv",
]

_MAX_BISECT = 64


@dataclass(frozen=True)
class CutSample:
    point: BoundaryPoint
    lam: float
    phi: float
    lambda_kappa: float
    corner_zone: bool
    focal_capped: bool


@dataclass(eq=False)
class CutTable:
    """Per-sample cut data over a boundary sampling (struct of arrays)."""

    curve: object
    s: np.ndarray            # (n,) arclength
    position: np.ndarray     # (n, 2)
    tangent: np.ndarray      # (n, 2) unit tangents
    normal: np.ndarray       # (n, 2) outward unit normals
    kappa: np.ndarray        # (n,)
    arc_index: np.ndarray    # (n,) int
    param: np.ndarray        # (n,)
    lam: np.ndarray          # (n,) cut values; 0 in corner zones
    phi: np.ndarray          # (n,)
    lambda_kappa: np.ndarray  # (n,)
    corner_zone: np.ndarray  # (n,) bool
    focal_capped: np.ndarray  # (n,) bool, lambda returned at the 1/kappa cap
    tol: float
    accept: float

    def __len__(self):
        return self.s.size

    def sample(self, i):
        pt = BoundaryPoint(
            arc_index=int(self.arc_index[i]), param=float(self.param[i]),
            s=float(self.s[i]), position=self.position[i].copy(),
            tangent=self.tangent[i].copy(), normal=self.normal[i].copy(),
            curvature=float(self.kappa[i]))
        return CutSample(point=pt, lam=float(self.lam[i]),
                         phi=float(self.phi[i]),
                         lambda_kappa=float(self.lambda_kappa[i]),
                         corner_zone=bool(self.corner_zone[i]),
                         focal_capped=bool(self.focal_capped[i]))

    def smooth(self):
        """Boolean mask of samples outside corner zones."""
        return ~self.corner_zone


def phi(lam, kappa):
    """Criterion function, planar closed form lambda - lambda^2 kappa / 2."""
    lam = np.asarray(lam, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    return lam - 0.5 * lam * lam * kappa


def phi_general(lam, kappas, tol=1e-10):
    """phi for a supplied principal-curvature vector (dimension >= 3).

    Adaptive quadrature of prod_j (1 - t kappa_j) over [0, lam].
    """
    kappas = np.asarray(kappas, dtype=float)
    if kappas.ndim != 1 or kappas.size < 1:
        raise ValueError("kappas must be a 1-d curvature vector")

    def integrand(t):
        return float(np.prod(1.0 - t * kappas))

    return adaptive_simpson(integrand, 0.0, float(lam), tol=tol)


def _nearest_s(projector, points):
    """Arclength of the (site-resolution) nearest boundary point."""
    sites = getattr(projector, "sites", None)
    if sites is not None:
        idx, _ = _kernels.nearest_site(points, sites.points)
        return sites.s[idx]
    return projector.project(points).s


def cut_predicate(projector, position, normal, s, t, accept, length):
    """P(t): the nearest boundary point of y - t nu(y) is y itself.

    Acceptance is an arclength ball of radius `accept` around s; exact
    equality is unattainable on a sampled boundary.
    """
    position = np.atleast_2d(position)
    normal = np.atleast_2d(normal)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = position - t[:, None] * normal
    s_near = _nearest_s(projector, x)
    return cyclic_dist(s_near, s, length) <= accept


def _bisect_cut(curve, geom, projector, tol, accept, active=None):
    """Vectorized bisection for the cut values of a sampled geometry struct.

    Returns (lam, focal_capped).  `active` masks samples to solve; inactive
    rows come back 0.  Raises DegenerateRayError when the predicate already
    fails at depth tol for an active sample.
    """
    n = geom.s.size
    length = curve.length
    pos, nrm, s = geom.position, geom.normal, geom.s
    if active is None:
        active = np.ones(n, dtype=bool)

    kplus = np.maximum(geom.curvature, 0.0)
    with np.errstate(divide="ignore"):
        cap = np.where(kplus > 0, 1.0 / np.maximum(kplus, 1e-300), np.inf)
    cap = np.minimum(cap, curve.extent)

    lam = np.zeros(n)
    focal = np.zeros(n, dtype=bool)
    if not np.any(active):
        return lam, focal

    ok0 = cut_predicate(projector, pos, nrm, s, np.full(n, tol), accept, length)
    bad = active & ~ok0
    if np.any(bad):
        i = int(np.argmax(bad))
        raise DegenerateRayError(
            f"inward ray at s={s[i]:.6g} loses its base point at depth tol; "
            "sample sits next to a corner")

    ok_cap = cut_predicate(projector, pos, nrm, s, cap, accept, length)
    at_cap = active & ok_cap
    lam[at_cap] = cap[at_cap]
    focal[at_cap] = True

    solve = active & ~ok_cap
    lo = np.full(n, tol)
    hi = cap.copy()
    for _ in range(_MAX_BISECT):
        gap = hi[solve] - lo[solve]
        if gap.size == 0 or gap.max() <= tol:
            break
        mid = 0.5 * (lo + hi)
        ok = cut_predicate(projector, pos[solve], nrm[solve], s[solve],
                           mid[solve], accept, length)
        sub = np.where(solve)[0]
        lo[sub[ok]] = mid[sub[ok]]
        hi[sub[~ok]] = mid[sub[~ok]]
    lam[solve] = 0.5 * (lo[solve] + hi[solve])
    return lam, focal


def cut_table(curve, n=2048, projector=None, tol=None, samples=None):
    """Cut values, phi, and kappa*lambda over a uniform boundary sampling.

    Samples within arclength 10*tol of a corner are excluded from the ray
    computation (lambda -> 0 at convex corners); they carry lambda = phi = 0
    and corner_zone = True.
    """
    if projector is None:
        projector = CurveProjector(curve)
    if tol is None:
        tol = 1e-6 * curve.extent
    accept = max(5.0 * tol, 3.0 * projector.spacing)
    geom = samples if samples is not None else curve.resample_struct(n)

    corner_s = curve.corner_arclengths()
    if corner_s.size:
        dmin = np.min(cyclic_dist(geom.s[:, None], corner_s[None, :],
                                  curve.length), axis=1)
        corner_zone = dmin <= 10.0 * tol
    else:
        corner_zone = np.zeros(geom.s.size, dtype=bool)

    lam, focal = _bisect_cut(curve, geom, projector, tol, accept,
                             active=~corner_zone)
    phival = np.where(corner_zone, 0.0, phi(lam, geom.curvature))
    return CutTable(
        curve=curve, s=geom.s.copy(), position=geom.position.copy(),
        tangent=geom.tangent.copy(),
        normal=geom.normal.copy(), kappa=geom.curvature.copy(),
        arc_index=geom.arc_index.copy(), param=geom.param.copy(),
        lam=lam, phi=phival, lambda_kappa=lam * geom.curvature,
        corner_zone=corner_zone, focal_capped=focal, tol=tol, accept=accept)


def cut_value(curve, y, projector=None, tol=None):
    """Cut value of a single boundary point (BoundaryPoint or arclength)."""
    if projector is None:
        projector = CurveProjector(curve)
    if tol is None:
        tol = 1e-6 * curve.extent
    accept = max(5.0 * tol, 3.0 * projector.spacing)
    if isinstance(y, BoundaryPoint):
        geom = curve.geometry([y.arc_index], [y.param])
    else:
        geom = curve.geometry_at_s([float(y)])
    lam, _ = _bisect_cut(curve, geom, projector, tol, accept)
    return float(lam[0])


def max_lambda_kappa(table):
    """max over smooth samples of kappa*lambda (the curvature bound says <= 1)."""
    vals = table.lambda_kappa[table.smooth()]
    return float(np.max(vals)) if vals.size else 0.0


def focal_check(curve, table=None, n=4096, projector=None, tol=None):
    """|kappa*lambda - 1| at the maximal-curvature sample.

    At the curvature maximum the cut value equals the focal depth 1/kappa,
    so the product is 1 there.  Cornered curves have no smooth maximum to
    test against.
    """
    if curve.detect_corners():
        raise InapplicableError("focal identity needs a smooth curve")
    if table is None:
        table = cut_table(curve, n=n, projector=projector, tol=tol)
    i = int(np.argmax(table.kappa))
    if table.kappa[i] <= 0:
        raise InapplicableError("focal identity needs positive curvature")
    return abs(float(table.lambda_kappa[i]) - 1.0)


def lambda_lipschitz(table):
    """Empirical Lipschitz constant of lambda along arclength (diagnostic)."""
    m = table.smooth()
    s, lam = table.s[m], table.lam[m]
    if s.size < 3:
        return 0.0
    ds = cyclic_dist(np.roll(s, -1), s, table.curve.length)
    dlam = np.abs(np.roll(lam, -1) - lam)
    keep = ds > 0
    # skip pairs that straddle an excluded corner zone
    if np.any(~m):
        gap_jump = ds > 2.5 * table.curve.length / max(len(table), 1)
        keep &= ~gap_jump
    return float(np.max(dlam[keep] / ds[keep])) if np.any(keep) else 0.0


# ------------------------------------------------------------- ray charts

@dataclass(eq=False)
class NormalRayChart:
    """Inward-normal ray bundle over an arclength window of the boundary.

    X(sigma, t) = Y(sigma) - t N(sigma) with Jacobian J(sigma, t) =
    1 - t K(sigma); rays are truncated at the cut value Lambda(sigma).
    """

    curve: object
    sigma: np.ndarray    # (n,) arclength parameters
    Y: np.ndarray        # (n, 2) base points
    N: np.ndarray        # (n, 2) outward unit normals
    K: np.ndarray        # (n,) curvatures
    Lam: np.ndarray      # (n,) cut values
    tol: float

    @property
    def sigma_range(self):
        return float(self.sigma[0]), float(self.sigma[-1])

    def jacobian(self, t):
        """J(sigma, t) = 1 - t K(sigma); t scalar or (n,) or (n, m)."""
        t = np.asarray(t, dtype=float)
        if t.ndim <= 1:
            return 1.0 - t * self.K
        return 1.0 - t * self.K[:, None]

    def points(self, t_fracs):
        """Chart points X(sigma, f*Lambda(sigma)) for fractions f in [0, 1]."""
        f = np.asarray(t_fracs, dtype=float)
        t = f[None, :] * self.Lam[:, None]
        return self.Y[:, None, :] - t[:, :, None] * self.N[:, None, :]


def build_ray_chart(curve, s_range, n=128, projector=None, tol=None):
    """Tabulate the normal-ray chart over the arclength window s_range.

    The window must not contain a corner (the normal jumps there); windows
    may wrap around s = 0.
    """
    s_lo, s_hi = float(s_range[0]), float(s_range[1])
    L = curve.length
    span = (s_hi - s_lo) % L
    closed = span == 0.0 and s_hi != s_lo
    if span == 0.0 and not closed:
        raise InapplicableError("empty arclength window")
    corner_s = curve.corner_arclengths()
    if corner_s.size:
        if closed:
            raise InapplicableError("arclength window contains a corner")
        rel = (corner_s - s_lo) % L
        if np.any((rel > 1e-12 * L) & (rel < span - 1e-12 * L)):
            raise InapplicableError("arclength window contains a corner")
    if projector is None:
        projector = CurveProjector(curve)
    if tol is None:
        tol = 1e-6 * curve.extent
    accept = max(5.0 * tol, 3.0 * projector.spacing)
    if closed:
        sigma = (s_lo + np.arange(n) * (L / n)) % L
    else:
        sigma = (s_lo + np.linspace(0.0, span, n)) % L
    geom = curve.geometry_at_s(sigma)
    lam, _ = _bisect_cut(curve, geom, projector, tol, accept)
    return NormalRayChart(curve=curve, sigma=sigma, Y=geom.position.copy(),
                          N=geom.normal.copy(), K=geom.curvature.copy(),
                          Lam=lam, tol=tol)


def _segments_cross(p1, p2, q1, q2):
    """Proper pairwise crossing test between segment batches."""
    def orient(a, b, c):
        return ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    d1 = orient(p1, p2, q1)
    d2 = orient(p1, p2, q2)
    d3 = orient(q1, q2, p1)
    d4 = orient(q1, q2, p2)
    return (d1 * d2 < 0) & (d3 * d4 < 0)


def chart_report(chart, n_t=9):
    """Jacobian and injectivity diagnostics for a ray chart.

    Injectivity of X on {t < Lambda} is checked as: no two truncated ray
    segments cross properly, and no two sampled chart points from distinct
    rays coincide.  A fixed separation floor is meaningless where rays
    focus (a disk's rays all meet at the center), so the minimum observed
    separation is reported as a diagnostic rather than asserted against.
    """
    n = chart.sigma.size
    jac_end = chart.jacobian(chart.Lam)
    delta = max(chart.tol, 1e-9 * chart.curve.extent)
    a = chart.Y - delta * chart.N
    b = chart.Y - (chart.Lam - delta)[:, None] * chart.N
    iu, ju = np.triu_indices(n, k=1)
    crossings = int(np.sum(_segments_cross(a[iu], b[iu], a[ju], b[ju])))

    fr = np.linspace(0.0, 1.0, n_t + 1)[:-1]
    pts = chart.points(fr).reshape(-1, 2)
    ray_of = np.repeat(np.arange(n), fr.size)
    pu, qu = np.triu_indices(pts.shape[0], k=1)
    off_ray = ray_of[pu] != ray_of[qu]
    sep = np.linalg.norm(pts[pu[off_ray]] - pts[qu[off_ray]], axis=1)
    min_sep = float(sep.min()) if sep.size else np.inf
    coincident = int(np.sum(sep < 1e-9 * chart.curve.extent))

    return {
        "jacobian_at_zero_max_err": float(np.max(np.abs(chart.jacobian(0.0) - 1.0))),
        "jacobian_end_min": float(jac_end.min()),
        "jacobian_ok": bool(jac_end.min() >= -1e-6),
        "ray_crossings": crossings,
        "coincident_points": coincident,
        "injective": bool(crossings == 0 and coincident == 0),
        "min_point_separation": min_sep,
    }


def export_cut_csv(table, path):
    """CSV rows s,x,y,nx,ny,kappa,lambda,phi,kappa_lambda per sample."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["s", "x", "y", "nx", "ny", "kappa", "lambda", "phi",
                    "kappa_lambda"])
        for i in range(len(table)):
            w.writerow([f"{v:.17g}" for v in (
                table.s[i], table.position[i, 0], table.position[i, 1],
                table.normal[i, 0], table.normal[i, 1], table.kappa[i],
                table.lam[i], table.phi[i], table.lambda_kappa[i])])
