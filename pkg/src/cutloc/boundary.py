"""Closed boundary curves assembled from C2 arcs, with arclength machinery.

The curve is oriented counterclockwise; the outward normal at a point with
unit tangent T = (tx, ty) is nu = (ty, -tx), and the signed curvature
kappa = (x'y'' - y'x'') / |Y'|^3 is positive where the domain is locally
convex (kappa = 1/R on a circle of radius R).
"""

from dataclasses import dataclass

import numpy as np

from .arcs import TransformedArc
from .errors import ConstructionError

__all__ = [
    "BoundaryPoint",
    "CornerInfo",
    "DenseSites",
    "BoundaryCurve",
]

DEFAULT_ANGLE_TOL = 1e-7   # radians; junctions turning less are treated as C1
_TABLE_NODES = 65536       # fixed arclength-table resolution; a single
                           # size keeps every query independent of what
                           # was computed on the curve before


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    arc_index: int
    param: float
    s: float
    position: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    curvature: float


@dataclass(frozen=True, eq=False)
class CornerInfo:
    junction: int          # between arcs[junction] and arcs[junction+1 mod n]
    s: float
    position: np.ndarray
    nu_minus: np.ndarray
    nu_plus: np.ndarray
    delta_nu: np.ndarray
    angle: float           # signed turning angle at the corner
    convex: bool


@dataclass(frozen=True, eq=False)
class DenseSites:
    """Midpoint-offset boundary sampling used by projection kernels."""
    points: np.ndarray     # (m, 2)
    params: np.ndarray     # (m,)
    arc_index: np.ndarray  # (m,) int
    s: np.ndarray          # (m,) cyclic arclength, increasing
    spacing: float         # mean arclength spacing L/m


class _Geom:
    """Plain struct of vectorized point data."""

    __slots__ = ("arc_index", "param", "s", "position", "tangent", "normal",
                 "curvature", "speed")

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw[k])

    @property
    def n(self):
        return self.s.size

    def point(self, i):
        return BoundaryPoint(
            arc_index=int(self.arc_index[i]), param=float(self.param[i]),
            s=float(self.s[i]), position=self.position[i].copy(),
            tangent=self.tangent[i].copy(), normal=self.normal[i].copy(),
            curvature=float(self.curvature[i]))


class BoundaryCurve:
    """Closed CCW chain of arcs with cached arclength tables."""

    def __init__(self, arcs, closure_tol=None, validate=True):
        if not arcs:
            raise ConstructionError("need at least one arc")
        self.arcs = list(arcs)
        self._tables = None
        self._corners_cache = {}

        poll = self._poll_points(64)
        lo = poll.min(axis=0)
        hi = poll.max(axis=0)
        self._bbox = (lo[0], hi[0], lo[1], hi[1])
        self._extent = float(np.hypot(hi[0] - lo[0], hi[1] - lo[1]))
        if not self._extent > 0:
            raise ConstructionError("curve has zero extent")
        if closure_tol is None:
            closure_tol = 1e-9 * self._extent
        self.closure_tol = closure_tol
        if validate:
            self._validate()

    # ------------------------------------------------------------ validation

    def _poll_points(self, per_arc):
        pts = []
        for arc in self.arcs:
            t = np.linspace(arc.t0, arc.t1, per_arc, endpoint=False)
            pts.append(arc.point(t))
        return np.vstack(pts)

    def _validate(self):
        n = len(self.arcs)
        for i, arc in enumerate(self.arcs):
            nxt = self.arcs[(i + 1) % n]
            miss = np.linalg.norm(arc.end - nxt.start)
            if miss > self.closure_tol:
                raise ConstructionError(
                    f"arcs {i} and {(i + 1) % n} fail to chain: gap {miss:.3e}")
        for i, arc in enumerate(self.arcs):
            t = np.linspace(arc.t0, arc.t1, 257)
            sp = np.linalg.norm(arc.velocity(t), axis=1)
            if np.min(sp) <= 1e-12 * (self._extent + 1.0):
                raise ConstructionError(f"arc {i} is not regular (|Y'| ~ 0)")
        poly = self.winding_polygon(512)
        x, y = poly[:, 0], poly[:, 1]
        area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if area2 <= 0:
            raise ConstructionError("curve is not counterclockwise")
        if _polyline_self_intersects(poly):
            raise ConstructionError("curve self-intersects at sampling resolution")

    # --------------------------------------------------------------- tables

    def _ensure_tables(self):
        if self._tables is not None:
            return
        total_nodes = _TABLE_NODES
        # bootstrap length fractions from a chord poll
        frac = []
        for arc in self.arcs:
            t = np.linspace(arc.t0, arc.t1, 257)
            p = arc.point(t)
            frac.append(np.sum(np.linalg.norm(np.diff(p, axis=0), axis=1)))
        frac = np.asarray(frac)
        frac = frac / frac.sum()

        p_tabs, s_tabs, lengths = [], [], []
        for arc, f in zip(self.arcs, frac):
            k = max(32, int(np.ceil(total_nodes * f)))
            p = np.linspace(arc.t0, arc.t1, k + 1)
            mid = 0.5 * (p[:-1] + p[1:])
            sp = np.linalg.norm(arc.velocity(p), axis=1)
            sm = np.linalg.norm(arc.velocity(mid), axis=1)
            dp = (arc.t1 - arc.t0) / k
            seg = dp / 6.0 * (sp[:-1] + 4.0 * sm + sp[1:])
            s = np.concatenate([[0.0], np.cumsum(seg)])
            p_tabs.append(p)
            s_tabs.append(s)
            lengths.append(s[-1])
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        self._tables = {"p": p_tabs, "s": s_tabs, "cum": cum}

    @property
    def length(self):
        self._ensure_tables()
        return float(self._tables["cum"][-1])

    @property
    def bbox(self):
        return self._bbox

    @property
    def extent(self):
        """Bounding-box diagonal; the length scale for tolerances and brackets."""
        return self._extent

    def param_to_s(self, arc_index, param):
        self._ensure_tables()
        arc_index = np.atleast_1d(np.asarray(arc_index, dtype=int))
        param = np.atleast_1d(np.asarray(param, dtype=float))
        out = np.empty(param.size)
        tabs = self._tables
        for a in np.unique(arc_index):
            m = arc_index == a
            out[m] = np.interp(param[m], tabs["p"][a], tabs["s"][a]) + tabs["cum"][a]
        return out

    def s_to_param(self, s):
        self._ensure_tables()
        tabs = self._tables
        L = tabs["cum"][-1]
        s = np.mod(np.atleast_1d(np.asarray(s, dtype=float)), L)
        aidx = np.clip(np.searchsorted(tabs["cum"], s, side="right") - 1,
                       0, len(self.arcs) - 1)
        t = np.empty(s.size)
        for a in np.unique(aidx):
            m = aidx == a
            t[m] = np.interp(s[m] - tabs["cum"][a], tabs["s"][a], tabs["p"][a])
        return aidx, t

    # ------------------------------------------------------------- geometry

    def geometry(self, arc_index, param):
        """Vectorized point data at (arc_index, param) pairs."""
        arc_index = np.atleast_1d(np.asarray(arc_index, dtype=int))
        param = np.atleast_1d(np.asarray(param, dtype=float))
        n = param.size
        pos = np.empty((n, 2))
        vel = np.empty((n, 2))
        acc = np.empty((n, 2))
        for a in np.unique(arc_index):
            m = arc_index == a
            arc = self.arcs[a]
            pos[m] = arc.point(param[m])
            vel[m] = arc.velocity(param[m])
            acc[m] = arc.acceleration(param[m])
        speed = np.linalg.norm(vel, axis=1)
        tangent = vel / speed[:, None]
        normal = np.stack([tangent[:, 1], -tangent[:, 0]], axis=-1)
        kappa = (vel[:, 0] * acc[:, 1] - vel[:, 1] * acc[:, 0]) / speed ** 3
        s = self.param_to_s(arc_index, param)
        return _Geom(arc_index=arc_index, param=param, s=s, position=pos,
                     tangent=tangent, normal=normal, curvature=kappa, speed=speed)

    def geometry_at_s(self, s):
        aidx, t = self.s_to_param(s)
        return self.geometry(aidx, t)

    def eval(self, param):
        """BoundaryPoint at param = (arc_index, t)."""
        arc_index, t = param
        self.arcs[arc_index].check_param(t)
        return self.geometry([arc_index], [t]).point(0)

    def eval_at_s(self, s):
        return self.geometry_at_s([s]).point(0)

    # ------------------------------------------------------------- sampling

    def resample_struct(self, n, shift_policy=True):
        """Uniform-arclength node struct; shifts the grid off detected corners."""
        if n < 1:
            raise ValueError("need n >= 1")
        self._ensure_tables()
        L = self.length
        nodes = np.arange(n) * (L / n)
        corner_s = self.corner_arclengths()
        if shift_policy and corner_s.size:
            tol_hit = 1e-9 * L
            if _min_cyclic_dist(nodes, corner_s, L) < tol_hit:
                nodes = nodes + L / (2 * n)
            # last resort: nudge individual offenders
            bad = _cyclic_dist_to_set(nodes, corner_s, L) < tol_hit
            if np.any(bad):
                nodes[bad] += 16 * tol_hit
        return self.geometry_at_s(nodes)

    def resample_arclength(self, n):
        """n boundary points uniform in arclength, avoiding corner points."""
        g = self.resample_struct(n)
        return [g.point(i) for i in range(g.n)]

    def dense_sites(self, m):
        """Midpoint-offset per-arc sampling (~m sites) for projection kernels."""
        self._ensure_tables()
        cum = self._tables["cum"]
        L = cum[-1]
        pts, prm, aix = [], [], []
        for a, arc in enumerate(self.arcs):
            frac = (cum[a + 1] - cum[a]) / L
            ma = max(8, int(round(m * frac)))
            t = arc.t0 + (np.arange(ma) + 0.5) * ((arc.t1 - arc.t0) / ma)
            pts.append(arc.point(t))
            prm.append(t)
            aix.append(np.full(ma, a, dtype=int))
        points = np.vstack(pts)
        params = np.concatenate(prm)
        arc_index = np.concatenate(aix)
        s = self.param_to_s(arc_index, params)
        return DenseSites(points=points, params=params, arc_index=arc_index,
                          s=s, spacing=L / s.size)

    def winding_polygon(self, m):
        """Per-arc sampling that keeps arc start points (corners included)."""
        pts = []
        total = sum((a.t1 - a.t0) for a in self.arcs)
        for arc in self.arcs:
            ma = max(8, int(round(m * (arc.t1 - arc.t0) / total)))
            t = arc.t0 + np.arange(ma) * ((arc.t1 - arc.t0) / ma)
            pts.append(arc.point(t))
        return np.vstack(pts)

    # -------------------------------------------------------------- corners

    def detect_corners(self, angle_tol=DEFAULT_ANGLE_TOL):
        """Junctions where the outward normal turns by more than angle_tol."""
        key = float(angle_tol)
        if key in self._corners_cache:
            return self._corners_cache[key]
        self._ensure_tables()
        cum = self._tables["cum"]
        L = cum[-1]
        out = []
        n = len(self.arcs)
        for j in range(n):
            arc = self.arcs[j]
            nxt = self.arcs[(j + 1) % n]
            gm = self.geometry([j], [arc.t1])
            gp = self.geometry([(j + 1) % n], [nxt.t0])
            nu_m = gm.normal[0]
            nu_p = gp.normal[0]
            cross = nu_m[0] * nu_p[1] - nu_m[1] * nu_p[0]
            dot = float(np.dot(nu_m, nu_p))
            ang = float(np.arctan2(cross, dot))
            if abs(ang) <= angle_tol:
                continue
            s = float(np.mod(cum[j + 1], L))
            out.append(CornerInfo(junction=j, s=s, position=gm.position[0].copy(),
                                  nu_minus=nu_m.copy(), nu_plus=nu_p.copy(),
                                  delta_nu=(nu_p - nu_m).copy(), angle=ang,
                                  convex=bool(cross > 0)))
        self._corners_cache[key] = out
        return out

    def corner_arclengths(self, angle_tol=DEFAULT_ANGLE_TOL):
        return np.asarray([c.s for c in self.detect_corners(angle_tol)])

    def check_starshaped(self, n=2048):
        """(flag, min <y, nu>) over an arclength sampling; origin-dependent."""
        g = self.resample_struct(n)
        support = np.sum(g.position * g.normal, axis=1)
        m = float(np.min(support))
        return bool(m > 0.0), m

    # ------------------------------------------------------------ transform

    def transformed(self, scale=1.0, rotation=0.0):
        """Dilated/rotated copy about the origin."""
        return BoundaryCurve(
            [TransformedArc(a, scale=scale, rotation=rotation) for a in self.arcs])


def _min_cyclic_dist(nodes, targets, L):
    return float(np.min(_cyclic_dist_to_set(nodes, targets, L)))


def _cyclic_dist_to_set(nodes, targets, L):
    d = np.abs(nodes[:, None] - targets[None, :])
    d = np.minimum(d, L - d)
    return d.min(axis=1)


def _polyline_self_intersects(poly):
    """Proper-crossing scan over all non-adjacent segment pairs of a closed polyline."""
    n = poly.shape[0]
    a = poly
    b = np.roll(poly, -1, axis=0)
    i, j = np.triu_indices(n, k=2)
    # the closing segment (n-1, 0) is adjacent to segment 0
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]

    def orient(p, q, r):
        return ((q[:, 0] - p[:, 0]) * (r[:, 1] - p[:, 1])
                - (q[:, 1] - p[:, 1]) * (r[:, 0] - p[:, 0]))

    p1, p2 = a[i], b[i]
    p3, p4 = a[j], b[j]
    o1 = orient(p1, p2, p3)
    o2 = orient(p1, p2, p4)
    o3 = orient(p3, p4, p1)
    o4 = orient(p3, p4, p2)
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
    return bool(np.any(crossing))
