"""Ray ODE machinery for web-shaped solutions u = h(d_Omega).

For an operator -div(A(|grad u|) grad u) = 1, a web ansatz reduces the
equation along each inward normal ray to a flux balance.  With
m(r) = A(r) r and

    g(t) = -(lambda - t) (a + b/2) / (a + b),   a = 1 - lambda kappa,
                                                b = kappa (lambda - t),

the profile slope is h'(t) = sign(g) m^{-1}(|g|) and the ray flux
F(t) = A(|h'|) h' (1 - t kappa) satisfies F(t) = -int_t^lambda (1 - s k) ds
with F(lambda) = 0.  |g(t)| equals the criterion value of the parallel
domain at depth t, so -F(0) reproduces phi at the ray origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .cutlocus import cut_table, cut_value, phi as phi_closed
from .errors import (ConstructionError, HypothesisViolationError,
                     InapplicableError, InvalidRayError, OperatorRangeError)
from .integrals import area, perimeter
from .symmetry import diameter, refine_max_curvature

__all__ = [
    "DivergenceOperator", "WebProfile", "PartialWebReport", "laplace",
    "plap", "parse_operator", "web_profile", "profile_checks",
    "flux_identity_residual", "partial_web_report",
]


@dataclass(frozen=True, eq=False)
class DivergenceOperator:
    """Gradient-magnitude multiplier A with m(r) = A(r) r invertible.

    Monotonicity of m on [0, r_max] is checked on a 1024-point grid at
    construction; m_inverse is a bisection to absolute tolerance 1e-12.
    """

    name: str
    A: object
    r_max: float = 16.0

    def __post_init__(self):
        r = np.linspace(0.0, self.r_max, 1025)
        m = np.asarray(self.A(r)) * r
        if not np.all(np.isfinite(m)):
            raise ConstructionError("A(r) r must be finite on [0, r_max]")
        if abs(float(m[0])) > 0.0:
            raise ConstructionError("m(0) = A(0)*0 must be 0")
        if not np.all(np.diff(m) > 0.0):
            raise ConstructionError(
                "m(r) = A(r) r must be strictly increasing on [0, r_max]")

    def m(self, r):
        r = np.asarray(r, dtype=float)
        return np.asarray(self.A(r)) * r

    def m_inverse(self, y, tol=1e-12):
        """Vectorized bisection solve of m(r) = y for y >= 0."""
        y = np.asarray(y, dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        if np.any(y < -1e-15):
            raise OperatorRangeError("m_inverse needs nonnegative input")
        top = float(self.m(np.array([self.r_max]))[0])
        if np.any(y > top * (1.0 + 1e-12)):
            raise OperatorRangeError(
                f"magnitude {float(np.max(y)):.6g} above m(r_max) = {top:.6g}")
        lo = np.zeros_like(y)
        hi = np.full_like(y, self.r_max)
        for _ in range(200):
            if np.max(hi - lo) <= tol:
                break
            mid = 0.5 * (lo + hi)
            high = self.m(mid) > y
            hi = np.where(high, mid, hi)
            lo = np.where(high, lo, mid)
        out = 0.5 * (lo + hi)
        out[y <= 0.0] = 0.0
        return float(out[0]) if scalar else out


def laplace() -> DivergenceOperator:
    return DivergenceOperator(name="laplace", A=lambda r: np.ones_like(r))


def plap(p) -> DivergenceOperator:
    """A(r) = r^(p-2); p = 2 reduces to the linear operator."""
    p = float(p)
    if p < 2.0:
        raise ConstructionError("plap exponent must be >= 2")
    if p == 2.0:
        return laplace()
    return DivergenceOperator(name=f"plap:{p:g}",
                              A=lambda r: np.power(r, p - 2.0))


def parse_operator(text: str) -> DivergenceOperator:
    t = text.strip().lower()
    if t == "laplace":
        return laplace()
    if t.startswith("plap:"):
        return plap(float(t.split(":", 1)[1]))
    raise ConstructionError(f"unknown operator spec {text!r}")


# -------------------------------------------------------------- ray profile

@dataclass(eq=False)
class WebProfile:
    op: DivergenceOperator
    kappa: float
    lam: float
    t: np.ndarray
    g: np.ndarray          # signed flux magnitude candidate, <= 0
    hprime: np.ndarray     # profile slope along the outward direction, <= 0
    flux: np.ndarray       # A(|h'|) h' (1 - t kappa)
    origin_s: Optional[float] = None

    @property
    def hprime0(self):
        return float(self.hprime[0])

    @property
    def flux0(self):
        return float(self.flux[0])


def _g_of(kappa, lam, t):
    """Stable factored evaluation of -(1/(1-tk)) int_t^lambda (1-sk) ds."""
    a = 1.0 - lam * kappa
    b = kappa * (lam - t)
    denom = a + b
    safe = np.where(np.abs(denom) > 1e-14, denom, 1.0)
    ratio = np.where(np.abs(denom) > 1e-14, (a + 0.5 * b) / safe, 0.5)
    return -(lam - t) * ratio


def web_profile(op, kappa, lam, t=None, n=257, origin_s=None):
    """Solve the ray flux balance for h' on [0, lambda]."""
    kappa = float(kappa)
    lam = float(lam)
    if lam <= 0.0:
        raise InvalidRayError("ray needs a positive cut value")
    if kappa * lam > 1.0 + 1e-9:
        raise InvalidRayError(
            f"kappa*lambda = {kappa * lam:.6g} exceeds 1: no valid chart")
    if t is None:
        t = np.linspace(0.0, lam, int(n))
    else:
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-15) or np.any(t > lam * (1.0 + 1e-12)):
            raise InvalidRayError("t samples must lie in [0, lambda]")
    g = _g_of(kappa, lam, t)
    hprime = -op.m_inverse(np.abs(g))
    flux = np.asarray(op.A(np.abs(hprime))) * hprime * (1.0 - t * kappa)
    return WebProfile(op=op, kappa=kappa, lam=lam, t=t, g=g, hprime=hprime,
                      flux=flux, origin_s=origin_s)


def profile_checks(prof):
    """Endpoint, antiderivative, and finite-difference flux-law residuals."""
    kappa, lam, t = prof.kappa, prof.lam, prof.t
    anti = -(lam - t) * (1.0 - 0.5 * kappa * (lam + t))
    anti_err = float(np.max(np.abs(prof.flux - anti)))
    dfdt = np.gradient(prof.flux, t, edge_order=2)
    law_err = float(np.max(np.abs(dfdt - (1.0 - t * kappa))))
    return {"flux_end": float(abs(prof.flux[-1])),
            "antiderivative_max_err": anti_err,
            "flux_law_max_err": law_err}


# --------------------------------------------------------- boundary sweeps

def _in_cyclic(s, lo, hi, L, tol=0.0):
    span = (hi - lo) % L
    if span == 0.0 and hi != lo:
        return True
    return (s - lo) % L <= span + tol


def _gamma_mask(table, gamma_arc):
    L = table.curve.length
    if gamma_arc is None:
        return np.ones(len(table), dtype=bool)
    lo, hi = float(gamma_arc[0]), float(gamma_arc[1])
    span = (hi - lo) % L
    if span == 0.0 and hi != lo:
        return np.ones(len(table), dtype=bool)
    ds = np.mod(table.s - lo, L)
    return ds <= span


def flux_identity_residual(curve, gamma_arc=None, op=None, table=None,
                           samples=4096, tol=None):
    """|A(|h'(0)|) h'(0) + phi(y0)| at the curvature argmax y0.

    Raises when the argmax falls outside the arclength window gamma_arc.
    """
    if op is None:
        op = laplace()
    if curve.detect_corners():
        raise InapplicableError("identity requires a smooth boundary")
    if table is None:
        table = cut_table(curve, n=samples, tol=tol)
    y0, kmax = refine_max_curvature(curve, table)
    if gamma_arc is not None and not _in_cyclic(
            y0.s, float(gamma_arc[0]), float(gamma_arc[1]), curve.length,
            tol=1e-9 * curve.length):
        raise HypothesisViolationError(
            f"curvature argmax at s = {y0.s:.6g} lies outside gamma_arc")
    lam0 = cut_value(curve, y0)
    phi0 = float(phi_closed(lam0, kmax))
    prof = web_profile(op, kmax, lam0, origin_s=y0.s)
    h0 = prof.hprime0
    return float(abs(float(op.A(np.abs(h0))) * h0 + phi0))


@dataclass(eq=False)
class PartialWebReport:
    operator: str
    flag_i: bool               # curvature max attained on gamma
    flag_ii_prime: bool        # flux candidate max attained on gamma
    collar: Tuple              # ((eps, defect), ...)
    s_y0: float
    kappa_y0: float
    lambda_y0: float
    phi_y0: float
    c_gamma: float             # -A(|h'(0)|) h'(0) at y0
    kappa_max_global: float
    c_max_global: float
    ratio: float
    verdict: str
    note: str
    samples_used: int


def partial_web_report(curve, gamma_arc=None, op=None,
                       eps_list=(0.2, 0.1, 0.05), samples=2048, table=None):
    """Hypothesis record for the partially overdetermined web criterion.

    Solves a profile per smooth boundary sample, compares curvature and
    flux-candidate maxima on gamma against the whole boundary, and reports
    the collar-inequality defect per eps.  Diagnostics are produced even
    when hypotheses fail.
    """
    if op is None:
        op = laplace()
    if table is None:
        table = cut_table(curve, n=samples)
    smooth = table.smooth()
    mask_g = _gamma_mask(table, gamma_arc) & smooth
    notes = []

    # flux candidate at every smooth sample: c(y) = -A(|h'(0)|) h'(0)
    g0 = _g_of(table.kappa[smooth], table.lam[smooth],
               np.zeros(int(np.count_nonzero(smooth))))
    hp0 = -op.m_inverse(np.abs(g0))
    c_all = -np.asarray(op.A(np.abs(hp0))) * hp0
    s_smooth = table.s[smooth]
    in_g = mask_g[smooth]

    y0g, k_global = refine_max_curvature(curve, table)
    c_max_global = float(np.max(c_all))
    if not np.any(in_g):
        raise HypothesisViolationError("gamma_arc contains no smooth samples")

    idx_g = np.flatnonzero(in_g)
    i_best = idx_g[int(np.argmax(table.kappa[smooth][idx_g]))]
    attain_tol = 1e-6 * max(1.0, abs(k_global))
    if gamma_arc is None:
        flag_i = True
    else:
        in_window = _in_cyclic(y0g.s, float(gamma_arc[0]),
                               float(gamma_arc[1]), curve.length,
                               tol=1e-9 * curve.length)
        flag_i = bool(in_window or table.kappa[smooth][i_best]
                      >= k_global - attain_tol)
    c_gamma_max = float(np.max(c_all[idx_g]))
    flag_iip = bool(c_gamma_max >= c_max_global
                    - 1e-6 * max(1.0, abs(c_max_global)))

    # anchor point: curvature argmax within gamma (global argmax if inside)
    if gamma_arc is None or _in_cyclic(y0g.s, float(gamma_arc[0]),
                                       float(gamma_arc[1]), curve.length,
                                       tol=1e-9 * curve.length):
        y0, k0 = y0g, k_global
    else:
        sm_idx = np.flatnonzero(smooth)
        i_tab = sm_idx[i_best]
        y0 = table.sample(int(i_tab)).point
        k0 = float(table.kappa[i_tab])
        notes.append("curvature argmax lies outside gamma; anchoring at the "
                     "gamma-restricted maximum")
    lam0 = cut_value(curve, y0)
    phi0 = float(phi_closed(lam0, k0))
    hp_y0 = -op.m_inverse(abs(float(_g_of(k0, lam0, np.zeros(1))[0])))
    c_gamma = -float(op.A(np.abs(hp_y0))) * hp_y0

    # collar sup of -A(|h'(t)|) h'(t) = |g_y(t)| over depths t < eps
    lam_s = table.lam[smooth]
    kap_s = table.kappa[smooth]
    collar = []
    for eps in eps_list:
        tmax = np.minimum(float(eps), lam_s)
        tt = tmax[:, None] * np.linspace(0.0, 1.0, 17)[None, :]
        gg = np.abs(_g_of(kap_s[:, None], lam_s[:, None], tt))
        defect = float(np.max(gg) - c_gamma)
        collar.append((float(eps), defect))

    corners = curve.detect_corners()
    starshaped, _ = curve.check_starshaped()
    ratio = area(curve) / perimeter(curve)
    slack = 1e-4 * diameter(curve)
    if any(not c.convex for c in corners):
        verdict = "inapplicable"
        notes.append("concave corners present")
    elif corners:
        verdict = "inapplicable"
        notes.append("corners present; the web criterion needs a C2 boundary")
    elif not starshaped:
        verdict = "inapplicable"
        notes.append("not starshaped with respect to the origin")
    elif flag_i and phi0 >= ratio - slack:
        verdict = "ball"
    else:
        verdict = "hypotheses-not-met"
        if not flag_i:
            notes.append("curvature max not attained on gamma")
        if phi0 < ratio - slack:
            notes.append(f"phi(y0)={phi0:.6g} < ratio={ratio:.6g}")

    return PartialWebReport(
        operator=op.name, flag_i=flag_i, flag_ii_prime=flag_iip,
        collar=tuple(collar), s_y0=float(y0.s), kappa_y0=float(k0),
        lambda_y0=float(lam0), phi_y0=phi0, c_gamma=c_gamma,
        kappa_max_global=float(k_global), c_max_global=c_max_global,
        ratio=float(ratio), verdict=verdict, note="; ".join(notes),
        samples_used=len(table))
