"""Adaptive Simpson quadrature and bracketed root finding."""
from __future__ import annotations

import logging
import math

import numpy as np
from scipy import optimize

from .exceptions import ConvergenceError, NoRootError

log = logging.getLogger(__name__)

MAX_DEPTH = 40


def adaptive_simpson(func, a, b, tol=1e-9, max_depth=MAX_DEPTH):
    """Integrate ``func`` over [a, b] to absolute tolerance ``tol``.

    Classic recursive Simpson with Richardson correction, run from an explicit
    stack.  Intervals that hit ``max_depth`` are accepted as they stand.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = func(lm), func(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - est
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
            continue
        stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
        stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
    return sign * total


def find_root(func, lo, hi, xtol=1e-12, scan=0, label="root"):
    """Root of ``func`` in [lo, hi] by Brent's hybrid bisection/secant method.

    With ``scan > 0`` the bracket is first subdivided into ``scan`` pieces and
    the first sign change from positive to non-positive is used.  Returns the
    root and the bracket that was handed to the solver.
    """
    flo, fhi = func(lo), func(hi)
    if scan:
        step = (hi - lo) / scan
        x0, f0 = lo, flo
        for i in range(1, scan + 1):
            x1 = hi if i == scan else lo + i * step
            f1 = fhi if i == scan else func(x1)
            if f0 > 0 >= f1 or f0 < 0 <= f1:
                lo, hi, flo, fhi = x0, x1, f0, f1
                break
            x0, f0 = x1, f1
        else:
            raise NoRootError(f"no sign change for {label} on [{lo:.6g}, {hi:.6g}]")
    if flo == 0.0:
        return lo, (lo, hi)
    if fhi == 0.0:
        return hi, (lo, hi)
    if (flo > 0) == (fhi > 0):
        raise NoRootError(
            f"no sign change for {label} on [{lo:.6g}, {hi:.6g}]: f={flo:.3g}, {fhi:.3g}")
    try:
        root = optimize.brentq(func, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except RuntimeError as exc:
        raise ConvergenceError(f"{label}: {exc}") from exc
    log.debug("%s bracket [%r, %r] -> %r", label, lo, hi, root)
    return root, (lo, hi)


def expand_bracket(func, lo, hi, limit, factor=2.0, max_steps=60):
    """Grow ``hi`` toward ``limit`` geometrically until func changes sign."""
    flo = func(lo)
    x = hi
    for _ in range(max_steps):
        fx = func(x)
        if (fx > 0) != (flo > 0) or fx == 0.0:
            return lo, x
        if x >= limit:
            break
        x = min(limit, lo + factor * (x - lo))
    raise NoRootError(f"no sign change before {limit:.6g}")


def log_integral(x, tol=1e-10):
    """Logarithmic integral li(x) = li(2) + int_2^x dt / log t, for x >= 2."""
    if x < 2:
        raise ValueError("li is evaluated for x >= 2 here")
    li2 = 1.0451637801174927
    # substitute t = e^s so the integrand e^s / s is smooth on [log 2, log x]
    return li2 + adaptive_simpson(lambda s: math.exp(s) / s, math.log(2.0), math.log(x),
                                  tol=tol * max(1.0, x / math.log(x)))
