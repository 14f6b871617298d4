"""Ball-characterization criterion for starshaped planar domains.

Locates the maximal-curvature boundary point y0, tests the two hypotheses
(curvature max attained at y0; phi(y0) >= |Omega|/|boundary|), verifies the
pointwise inequality chain, and analyzes the auxiliary function f whose
maximum over the admissible cone is 1/n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .boundary import BoundaryPoint
from .cutlocus import cut_table, cut_value, phi as phi_closed
from .errors import ConfigurationError, HypothesisViolationError
from .integrals import area, perimeter
from .quadrature import golden_min_vec

__all__ = [
    "SymmetryReport", "ChainCheck", "f_value", "f_max_bruteforce",
    "criterion_report", "inequality_chain_check", "refine_max_curvature",
    "diameter",
]


# ------------------------------------------------------- auxiliary function f

def _f_rows(X):
    """f over rows of X (m, k): (sum x / k) * int_0^1 prod (1 - s x_j) ds.

    The product is expanded to ascending coefficients in s, so the inner
    integral is exact: sum_i c_i / (i + 1).
    """
    X = np.asarray(X, dtype=float)
    m, k = X.shape
    c = np.ones((m, 1))
    for j in range(k):
        xj = X[:, j][:, None]
        padded = np.concatenate([c, np.zeros((m, 1))], axis=1)
        shifted = np.concatenate([np.zeros((m, 1)), c], axis=1)
        c = padded - xj * shifted
    weights = 1.0 / (np.arange(c.shape[1]) + 1.0)
    inner = c @ weights
    return (np.sum(X, axis=1) / k) * inner


def f_value(x):
    """f at a single point x in R^(n-1)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return float(_f_rows(x[None, :])[0])


def f_max_bruteforce(n, resolution=241):
    """Grid maximum of f over {sum x >= 0} cap [-3, 1]^(n-1).

    Returns (max value, argmax vector).  The theoretical maximum is 1/n at
    the all-ones point; a violation of max <= 1/n + 1e-9 raises.
    """
    if n not in (2, 3, 4):
        raise ConfigurationError("n must be 2, 3, or 4")
    if resolution < 200:
        raise ConfigurationError("resolution must be at least 200")
    axis = np.linspace(-3.0, 1.0, int(resolution))
    k = n - 1
    best = -np.inf
    arg = None
    if k == 1:
        X = axis[:, None]
        mask = X[:, 0] >= 0.0
        vals = _f_rows(X[mask])
        i = int(np.argmax(vals))
        best = float(vals[i])
        arg = X[mask][i]
    else:
        tail = np.stack(np.meshgrid(*([axis] * (k - 1)), indexing="ij"),
                        axis=-1).reshape(-1, k - 1)
        tail_sum = np.sum(tail, axis=1)
        for x0 in axis:
            mask = tail_sum + x0 >= 0.0
            if not np.any(mask):
                continue
            X = np.concatenate([np.full((int(mask.sum()), 1), x0),
                                tail[mask]], axis=1)
            vals = _f_rows(X)
            i = int(np.argmax(vals))
            if vals[i] > best:
                best = float(vals[i])
                arg = X[i]
    if best > 1.0 / n + 1e-9:
        raise HypothesisViolationError(
            f"f exceeded 1/{n} on the admissible cone: {best}")
    return best, arg


# ----------------------------------------------------------------- reporting

@dataclass(frozen=True, eq=False)
class SymmetryReport:
    y0: BoundaryPoint
    H_max: float
    phi_at_y0: float
    lambda_at_y0: float
    ratio: float
    hypothesis_H: bool
    hypothesis_phi: bool
    phi_constancy: float
    basic_bound_max: float
    corner_status: str        # none | convex-only | concave-present
    starshaped: bool
    verdict: str              # ball | hypotheses-not-met | inapplicable
    note: str
    diameter: float
    phi_slack: float
    constancy_tol: float
    samples_used: int


def diameter(curve, n=1024):
    """Max pairwise distance over a boundary polygon sampling."""
    pts = curve.winding_polygon(n)
    d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    return float(np.sqrt(np.max(d2)))


def refine_max_curvature(curve, table):
    """Golden-section refinement of the sampled curvature argmax.

    Searches one sample spacing either side of the best smooth sample,
    within the owning arc.  Returns (BoundaryPoint, kappa_max).
    """
    smooth = table.smooth()
    if not np.any(smooth):
        raise ConfigurationError("no smooth samples to maximize over")
    idx = np.flatnonzero(smooth)
    i = idx[int(np.argmax(table.kappa[idx]))]
    a = int(table.arc_index[i])
    arc = curve.arcs[a]
    speed = max(float(np.linalg.norm(
        arc.velocity(np.array([table.param[i]]))[0])), 1e-30)
    dp = (curve.length / len(table)) / speed
    lo = np.array([max(arc.t0, table.param[i] - 2.0 * dp)])
    hi = np.array([min(arc.t1, table.param[i] + 2.0 * dp)])

    def neg_kappa(t):
        return -curve.geometry(np.full(t.shape, a), t).curvature

    t_best, neg = golden_min_vec(neg_kappa, lo, hi)
    y0 = curve.geometry([a], [float(t_best[0])]).point(0)
    return y0, float(-neg[0])


def criterion_report(curve, samples=2048, tol=1e-6, table=None,
                     projector=None, phi_slack=None, constancy_tol=1e-3):
    """Assemble the ball-characterization report.

    tol is the relative cut-value tolerance (scaled by curve extent).
    phi_slack defaults to 1e-4 * diameter; constancy_tol is the relative
    phi-spread threshold for the constant-phi route.
    """
    if table is None:
        table = cut_table(curve, n=samples, projector=projector,
                          tol=tol * curve.extent)
    smooth = table.smooth()
    n_smooth = int(np.count_nonzero(smooth))
    if n_smooth < 64:
        raise ConfigurationError(
            f"only {n_smooth} smooth samples; need at least 64")

    diam = diameter(curve)
    if phi_slack is None:
        phi_slack = 1e-4 * diam
    ratio = area(curve) / perimeter(curve)
    y0, H_max = refine_max_curvature(curve, table)
    lam0 = cut_value(curve, y0, tol=tol * curve.extent)
    phi0 = float(phi_closed(lam0, H_max))

    hyp_H = H_max > 0.0
    hyp_phi = bool(phi0 >= ratio - phi_slack)
    ph = table.phi[smooth]
    mean_phi = float(np.mean(ph))
    constancy = float((np.max(ph) - np.min(ph)) / max(abs(mean_phi), 1e-300))
    basic = float(np.max(ph * table.kappa[smooth]))

    corners = curve.detect_corners()
    if not corners:
        corner_status = "none"
    elif all(c.convex for c in corners):
        corner_status = "convex-only"
    else:
        corner_status = "concave-present"
    starshaped, _ = curve.check_starshaped()

    notes = []
    if corner_status == "concave-present":
        verdict = "inapplicable"
        notes.append("concave corners present")
        if constancy <= constancy_tol:
            notes.append(
                "phi is constant on the smooth part, yet the criterion "
                "does not apply: such a domain need not be a ball")
    elif not starshaped:
        verdict = "inapplicable"
        notes.append("not starshaped with respect to the origin")
    elif corner_status == "none" and hyp_H and hyp_phi:
        verdict = "ball"
    elif constancy <= constancy_tol:
        verdict = "ball"
        notes.append("constant-phi route")
    else:
        verdict = "hypotheses-not-met"
        if corner_status == "convex-only":
            notes.append("corners present and phi is not constant "
                         f"(spread {constancy:.3g})")
        if not hyp_H:
            notes.append("no positive curvature maximum on smooth samples")
        if not hyp_phi:
            notes.append(f"phi(y0)={phi0:.6g} < ratio={ratio:.6g}")
        if hyp_phi and corner_status == "none":
            notes.append(f"phi spread {constancy:.3g} exceeds "
                         f"{constancy_tol:.3g}")

    return SymmetryReport(
        y0=y0, H_max=H_max, phi_at_y0=phi0, lambda_at_y0=lam0, ratio=ratio,
        hypothesis_H=hyp_H, hypothesis_phi=hyp_phi, phi_constancy=constancy,
        basic_bound_max=basic, corner_status=corner_status,
        starshaped=bool(starshaped), verdict=verdict, note="; ".join(notes),
        diameter=diam, phi_slack=float(phi_slack),
        constancy_tol=float(constancy_tol), samples_used=len(table))


@dataclass(frozen=True, eq=False)
class ChainCheck:
    s: np.ndarray
    term_ratio_H: np.ndarray   # ratio * H(y) per smooth sample
    ratio_H_y0: float          # ratio * H(y0)
    phi_H_y0: float            # phi(y0) * H(y0)
    bound: float               # 1/2
    link1_ok: bool             # ratio H(y) <= ratio H(y0) at every sample
    link2_ok: bool             # ratio H(y0) <= phi(y0) H(y0)
    link3_ok: bool             # phi(y0) H(y0) <= 1/2 + tol
    first_failure: Optional[str]
    tol: float


def inequality_chain_check(curve, samples=2048, table=None, report=None,
                           tol=1e-9):
    """Pointwise chain ratio H(y) <= ratio H(y0) <= phi(y0) H(y0) <= 1/2."""
    if report is None:
        report = criterion_report(curve, samples=samples, table=table)
    if table is None:
        table = cut_table(curve, n=samples)
    smooth = table.smooth()
    slack = tol * max(1.0, abs(report.H_max)) * max(1.0, report.ratio)
    t1 = report.ratio * table.kappa[smooth]
    t2 = report.ratio * report.H_max
    t3 = report.phi_at_y0 * report.H_max
    link1 = bool(np.all(t1 <= t2 + slack))
    link2 = bool(t2 <= t3 + slack)
    link3 = bool(t3 <= 0.5 + max(tol, report.phi_slack * report.H_max))
    first = None
    if not link1:
        first = "curvature max exceeded at a sample"
    elif not link2:
        first = "phi(y0) below ratio"
    elif not link3:
        first = "basic bound exceeded at y0"
    return ChainCheck(s=table.s[smooth], term_ratio_H=t1, ratio_H_y0=float(t2),
                      phi_H_y0=float(t3), bound=0.5, link1_ok=link1,
                      link2_ok=link2, link3_ok=link3, first_failure=first,
                      tol=float(tol))
