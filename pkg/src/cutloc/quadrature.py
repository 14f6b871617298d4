"""Quadrature and 1D search helpers used throughout the package.

Everything here is deterministic: fixed node layouts, fixed iteration
counts or explicit tolerances, no randomness.
"""

import numpy as np

__all__ = [
    "adaptive_simpson",
    "simpson_doubling_vec",
    "golden_min_vec",
    "bisect_increasing",
]

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0  # 1/phi


def _simpson(fa, fm, fb, a, b):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adsimp(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    delta = left + right - whole
    # 15 = Richardson factor for Simpson's rule; the relative floor and the
    # inverted comparison (False for NaN) guarantee termination even when
    # the integrand overflows or poisons the estimates
    accept = 15.0 * max(tol, 4.0 * np.finfo(float).eps * abs(whole))
    if depth <= 0 or not (abs(delta) > accept):
        return left + right + delta / 15.0
    return (_adsimp(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + _adsimp(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1))


def adaptive_simpson(f, a, b, tol=1e-10, max_depth=48):
    """Adaptive Simpson integral of scalar f on [a, b] to absolute tolerance tol."""
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = _simpson(fa, fm, fb, a, b)
    return _adsimp(f, a, b, fa, fm, fb, whole, tol, max_depth)


def simpson_doubling_vec(f, a, b, tol=1e-10, max_nodes=4097):
    """Composite Simpson with node doubling, vectorized over a batch of intervals.

    f(t) takes an (n, k) array of nodes (row i holds nodes for interval i)
    and returns same-shape values.  a, b are (n,) arrays.  Doubling stops
    when the worst-row Richardson estimate is below tol.  Returns (n,).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    span = b - a
    k = 5
    tau = np.linspace(0.0, 1.0, k)
    vals = f(a[:, None] + span[:, None] * tau[None, :])
    est = _composite_simpson_rows(vals, span)
    while True:
        k2 = 2 * k - 1
        if k2 > max_nodes:
            return est
        tau_new = (np.arange(k - 1) + 0.5) / (k - 1)
        new_vals = f(a[:, None] + span[:, None] * tau_new[None, :])
        merged = np.empty((vals.shape[0], k2))
        merged[:, 0::2] = vals
        merged[:, 1::2] = new_vals
        vals = merged
        k = k2
        est2 = _composite_simpson_rows(vals, span)
        err = np.max(np.abs(est2 - est)) if est.size else 0.0
        est = est2
        if err <= 15.0 * tol:
            return est


def _composite_simpson_rows(vals, span):
    n = vals.shape[1]
    if n < 3 or n % 2 == 0:
        raise ValueError("need odd node count >= 3")
    h = span / (n - 1)
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return h / 3.0 * (vals @ w)


def golden_min_vec(f, lo, hi, iters=48):
    """Golden-section minimize f over [lo, hi], vectorized.

    f maps an (n,) parameter array to (n,) values.  48 iterations shrink
    the bracket by ~9e-11, enough for parameter tolerance 1e-10 on unit-
    scale brackets.  Returns (argmin, f(argmin)).
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(iters):
        take_left = f1 < f2
        hi = np.where(take_left, x2, hi)
        lo = np.where(take_left, lo, x1)
        x1 = hi - _INVPHI * (hi - lo)
        x2 = lo + _INVPHI * (hi - lo)
        # golden ratio makes one of the new points coincide with the
        # surviving old one, so a single fresh evaluation suffices
        xq = np.where(take_left, x1, x2)
        fq = f(xq)
        f1, f2 = np.where(take_left, fq, f2), np.where(take_left, f1, fq)
    xm = 0.5 * (lo + hi)
    return xm, f(xm)


def bisect_increasing(g, target, lo, hi, tol=1e-12, max_iter=200):
    """Solve g(r) = target for increasing g, vectorized, bisection to |hi-lo| <= tol."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    target = np.asarray(target, dtype=float)
    for _ in range(max_iter):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        below = g(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)
