"""Hot kernels: nearest-site scans, multiplicity gaps, winding numbers.

Two interchangeable backends.  The numba path JIT-compiles parallel scans;
the numpy path runs the same scans as chunked broadcasts.  Selection:

* env CUTLOC_NUMBA=0 forces the numpy path (default: numba when importable);
* env CUTLOC_THREADS caps the numba thread pool;
* set_backend() switches at runtime (used by the benchmark).

Both backends break distance ties toward the lowest site index, so results
are bit-identical run to run.
"""

import os

import numpy as np

try:
    from numba import config as _numba_config
    from numba import njit, prange, set_num_threads

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via CUTLOC_NUMBA=0 instead
    HAS_NUMBA = False

__all__ = [
    "HAS_NUMBA",
    "backend",
    "set_backend",
    "nearest_site",
    "nearest_site_gap",
    "winding_number",
]

_JIT_KW = dict(nogil=True, cache=True, parallel=True, fastmath=False)

_BIG = 1e300


# ---------------------------------------------------------------- numpy path

def _nearest_np(qx, qy, sx, sy):
    n, m = qx.size, sx.size
    idx = np.empty(n, np.int64)
    dist = np.empty(n, np.float64)
    chunk = max(1, 8_000_000 // max(m, 1))
    for a in range(0, n, chunk):
        b = min(n, a + chunk)
        dx = qx[a:b, None] - sx[None, :]
        dy = qy[a:b, None] - sy[None, :]
        d2 = dx * dx + dy * dy
        ii = np.argmin(d2, axis=1)
        idx[a:b] = ii
        dist[a:b] = np.sqrt(d2[np.arange(b - a), ii])
    return idx, dist


def _nearest_gap_np(qx, qy, sx, sy, ss, length, min_sep, cs):
    n, m = qx.size, sx.size
    idx = np.empty(n, np.int64)
    dist = np.empty(n, np.float64)
    gap = np.empty(n, np.float64)
    chunk = max(1, 4_000_000 // max(m, 1))
    for a in range(0, n, chunk):
        b = min(n, a + chunk)
        dx = qx[a:b, None] - sx[None, :]
        dy = qy[a:b, None] - sy[None, :]
        d = np.sqrt(dx * dx + dy * dy)
        ii = np.argmin(d, axis=1)
        best = d[np.arange(b - a), ii]
        locmin = (d <= np.roll(d, 1, axis=1)) & (d <= np.roll(d, -1, axis=1))
        ds = np.abs(ss[None, :] - ss[ii][:, None])
        ds = np.minimum(ds, length - ds)
        ok = ds >= min_sep
        if cs.size:
            # competitors whose shorter boundary path to the argmin crosses a
            # corner are genuinely distinct projections even at small
            # separation (feet straddling a convex corner)
            lo = np.minimum(ss[None, :], ss[ii][:, None])
            hi = np.maximum(ss[None, :], ss[ii][:, None])
            direct = (hi - lo) <= 0.5 * length
            for c in cs:
                inside_int = (lo <= c) & (c <= hi)
                ok |= np.where(direct, inside_int, ~inside_int)
        cand = locmin & ok
        second = np.min(np.where(cand, d, _BIG), axis=1)
        # a nearly flat distance profile (disk-like center) never produces a
        # second local minimum; total oscillation catches that degeneracy
        second = np.minimum(second, np.max(d, axis=1))
        idx[a:b] = ii
        dist[a:b] = best
        gap[a:b] = second - best
    return idx, dist, gap


def _winding_np(qx, qy, px, py):
    n, m = qx.size, px.size
    w = np.zeros(n, np.int64)
    x1 = np.roll(px, -1)
    y1 = np.roll(py, -1)
    chunk = max(1, 4_000_000 // max(m, 1))
    for a in range(0, n, chunk):
        b = min(n, a + chunk)
        x = qx[a:b, None]
        y = qy[a:b, None]
        cross = (x1 - px)[None, :] * (y - py[None, :]) - (x - px[None, :]) * (y1 - py)[None, :]
        up = (py[None, :] <= y) & (y < y1[None, :]) & (cross > 0)
        dn = (y1[None, :] <= y) & (y < py[None, :]) & (cross < 0)
        w[a:b] = up.sum(axis=1) - dn.sum(axis=1)
    return w


# ---------------------------------------------------------------- numba path

if HAS_NUMBA:

    @njit(**_JIT_KW)
    def _nearest_nb(qx, qy, sx, sy):
        n = qx.shape[0]
        m = sx.shape[0]
        idx = np.empty(n, np.int64)
        dist = np.empty(n, np.float64)
        for k in prange(n):
            best = _BIG
            bi = 0
            for j in range(m):
                dx = sx[j] - qx[k]
                dy = sy[j] - qy[k]
                d2 = dx * dx + dy * dy
                if d2 < best:
                    best = d2
                    bi = j
            idx[k] = bi
            dist[k] = np.sqrt(best)
        return idx, dist

    @njit(**_JIT_KW)
    def _nearest_gap_nb(qx, qy, sx, sy, ss, length, min_sep, cs):
        n = qx.shape[0]
        m = sx.shape[0]
        nc = cs.shape[0]
        idx = np.empty(n, np.int64)
        dist = np.empty(n, np.float64)
        gap = np.empty(n, np.float64)
        for k in prange(n):
            d = np.empty(m, np.float64)
            best = _BIG
            bi = 0
            for j in range(m):
                dx = sx[j] - qx[k]
                dy = sy[j] - qy[k]
                v = np.sqrt(dx * dx + dy * dy)
                d[j] = v
                if v < best:
                    best = v
                    bi = j
            s0 = ss[bi]
            second = _BIG
            dmax = 0.0
            for j in range(m):
                if d[j] > dmax:
                    dmax = d[j]
                jm = j - 1 if j > 0 else m - 1
                jp = j + 1 if j < m - 1 else 0
                if d[j] <= d[jm] and d[j] <= d[jp] and d[j] < second:
                    dsj = abs(ss[j] - s0)
                    if dsj > length - dsj:
                        dsj = length - dsj
                    ok = dsj >= min_sep
                    if not ok and nc > 0:
                        # a competitor across a corner is a distinct
                        # projection even at small arclength separation
                        lo = min(s0, ss[j])
                        hi = max(s0, ss[j])
                        direct = (hi - lo) <= 0.5 * length
                        for c in range(nc):
                            between = lo <= cs[c] <= hi
                            if between == direct:
                                ok = True
                                break
                    if ok:
                        second = d[j]
            if dmax < second:
                second = dmax
            idx[k] = bi
            dist[k] = best
            gap[k] = second - best
        return idx, dist, gap

    @njit(**_JIT_KW)
    def _winding_nb(qx, qy, px, py):
        n = qx.shape[0]
        m = px.shape[0]
        w = np.empty(n, np.int64)
        for k in prange(n):
            wk = 0
            x = qx[k]
            y = qy[k]
            for j in range(m):
                jn = j + 1 if j < m - 1 else 0
                y0 = py[j]
                y1 = py[jn]
                cross = (px[jn] - px[j]) * (y - y0) - (x - px[j]) * (y1 - y0)
                if y0 <= y < y1:
                    if cross > 0.0:
                        wk += 1
                elif y1 <= y < y0:
                    if cross < 0.0:
                        wk -= 1
            w[k] = wk
        return w


# ------------------------------------------------------------------ dispatch

def _env_wants_numba():
    flag = os.environ.get("CUTLOC_NUMBA", "").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return False
    return HAS_NUMBA


_backend = "numba" if _env_wants_numba() else "numpy"

if HAS_NUMBA:
    _threads = os.environ.get("CUTLOC_THREADS", "").strip()
    if _threads:
        try:
            set_num_threads(max(1, min(int(_threads), _numba_config.NUMBA_NUM_THREADS)))
        except ValueError:
            pass


def backend():
    """Name of the active kernel backend ("numba" or "numpy")."""
    return _backend


def set_backend(name):
    """Switch kernel backend at runtime; raises if numba is requested but absent."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _backend = name


def _as_xy(arr):
    a = np.ascontiguousarray(arr, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != 2:
        raise ValueError("expected an (n, 2) array")
    return np.ascontiguousarray(a[:, 0]), np.ascontiguousarray(a[:, 1])


def nearest_site(queries, sites):
    """Index of and distance to the nearest site for each query point."""
    qx, qy = _as_xy(queries)
    sx, sy = _as_xy(sites)
    if _backend == "numba":
        return _nearest_nb(qx, qy, sx, sy)
    return _nearest_np(qx, qy, sx, sy)


def nearest_site_gap(queries, sites, site_s, length, min_sep, corner_s=None):
    """Nearest site plus the multiplicity gap.

    The gap is (second-best - best) where second-best runs over sites that
    are local minima of the per-query distance sequence (cyclic in the site
    ordering) and either min_sep away from the argmin in cyclic arclength
    site_s or across one of the corner_s arclengths, capped by the total
    oscillation max(d) - min(d) so that flat profiles (centers of disk-like
    regions) register as ambiguous.
    """
    qx, qy = _as_xy(queries)
    sx, sy = _as_xy(sites)
    ss = np.ascontiguousarray(site_s, dtype=np.float64)
    if corner_s is None:
        cs = np.empty(0, dtype=np.float64)
    else:
        cs = np.ascontiguousarray(corner_s, dtype=np.float64)
    if _backend == "numba":
        return _nearest_gap_nb(qx, qy, sx, sy, ss, float(length),
                               float(min_sep), cs)
    return _nearest_gap_np(qx, qy, sx, sy, ss, float(length),
                           float(min_sep), cs)


def winding_number(queries, polygon):
    """Winding number of the closed polyline around each query point."""
    qx, qy = _as_xy(queries)
    px, py = _as_xy(polygon)
    if _backend == "numba":
        return _winding_nb(qx, qy, px, py)
    return _winding_np(qx, qy, px, py)
