"""Weighted-sum integrals, their closed-form majorants and the r threshold.

All error terms of the underlying sieve estimates are dropped, so the
thresholds computed here are idealised values rather than rigorous bounds.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .exceptions import DomainError, HypothesisError, InfeasibleParametersError
from .numerics import adaptive_simpson
from .sievefn import E_GAMMA, ankeny_onishi, get_limits

QUAD_TOL = 1e-9
# thresholds this close to an integer are rounded up
INTEGER_SLACK = 1e-9


def compute_C0():
    """e^gamma / (log 4 - 1/4)."""
    return E_GAMMA / (math.log(4.0) - 0.25)


@dataclass(frozen=True)
class ParameterPoint:
    """Sieve exponents: z = X^(1/v), s = X^(1/w), y = X^(1/u).

    tau1 and tau2 are the levels of distribution of the main and auxiliary
    sequences.
    """

    v: float
    w: float
    u: float
    tau1: float = 0.5
    tau2: float = 1.0

    @property
    def xi1(self):
        return self.v * self.tau1 + 1.0 - self.v / self.w

    @property
    def xi2(self):
        return self.v * self.tau2 + 1.0 - self.v / self.u

    def is_ordered(self):
        v, w, u = self.v, self.w, self.u
        if min(v, w, u) <= 0:
            return False
        return 0 < 1 / v < 1 / w < self.tau1 <= 0.5 < 1 / u < self.tau2 <= 1.0

    def check(self):
        if not self.is_ordered():
            raise InfeasibleParametersError(
                f"need 0 < 1/v < 1/w < tau1 <= 1/2 < 1/u < tau2 <= 1, got {self}")
        return self

    def to_dict(self):
        d = asdict(self)
        d.update(xi1=self.xi1, xi2=self.xi2)
        return d


@dataclass(frozen=True)
class ThresholdBreakdown:
    gku: float
    I_over_f: float
    J_term: float
    threshold: float
    eta: float
    r: int
    method: str = "exact"

    def to_dict(self):
        return asdict(self)


def minimal_r(threshold):
    """Smallest integer r with r > threshold, rounding up near integers."""
    return math.floor(threshold + INTEGER_SLACK) + 1


def integral_F(table, a, b):
    """int_a^b F(t) dt: closed form on the power-law segment t <= 1, exact
    integration of the interpolating cubics above it."""
    if a <= 0:
        raise DomainError("F is integrated over positive arguments only")
    if b <= a:
        return 0.0
    total = 0.0
    start = table.start
    if a < start:
        hi = min(b, start)
        sig = ankeny_onishi(table.g)
        g = table.g
        if g == 1:
            total += math.log(hi / a) / sig.A
        else:
            total += (a ** (1 - g) - hi ** (1 - g)) / ((g - 1) * sig.A)
        a = hi
    if b > a:
        total += table.integrate_F(a, b)
    return total


def integral_I(g, params, table_g, tol=QUAD_TOL):
    """I = g int_w^v (1 - u/s) F_g(v (tau1 - 1/s)) ds/s."""
    if table_g.g != g:
        raise DomainError(f"table has dimension {table_g.g}, expected {g}")
    v, w, u, tau1 = params.v, params.w, params.u, params.tau1
    if w == v:
        return 0.0
    if v * (tau1 - 1.0 / w) <= 0:
        raise DomainError("integrand argument v(tau1 - 1/s) is not positive on [w, v]")
    F = table_g.F

    def integrand(s):
        return (1.0 - u / s) * F(v * (tau1 - 1.0 / s)) / s

    return g * adaptive_simpson(integrand, w, v, tol=tol / g)


def integral_J(g, params, table_g_plus_1, tol=QUAD_TOL):
    """J = g int_u^w (1 - u/s) F_{g+1}(v (tau2 - 1/s)) ds/s."""
    if table_g_plus_1.g != g + 1:
        raise DomainError(f"table has dimension {table_g_plus_1.g}, expected {g + 1}")
    v, w, u, tau2 = params.v, params.w, params.u, params.tau2
    if u == w:
        return 0.0
    if v * (tau2 - 1.0 / u) <= 0:
        raise DomainError("integrand argument v(tau2 - 1/s) is not positive on [u, w]")
    F = table_g_plus_1.F

    def integrand(s):
        return (1.0 - u / s) * F(v * (tau2 - 1.0 / s)) / s

    return g * adaptive_simpson(integrand, u, w, tol=tol / g)


def bound_I_closed(g, params, f_at_tau1v, f_at_xi1, limits_g):
    """Closed-form estimate of I / f_g(tau1 v), stated for xi1 >= beta_g.

    Not a majorant everywhere.  The derivation writes I = I_1 + c I_2 and, in
    I_2, replaces f_g(t) by f_g(tau1 v) under the weight
    (g-1)/(g s) - t/(g s^2), s = v tau1 + 1 - t, which is negative near
    t = v tau1.  The I_1 part is a true bound; the total can fall a few
    percent short of I.  The J estimate below has no such step.
    """
    v, w, u = params.v, params.w, params.u
    xi1 = params.xi1
    if xi1 < limits_g.beta:
        raise HypothesisError(f"xi1 = {xi1:.6g} < beta_{g} = {limits_g.beta:.6g}")
    if f_at_tau1v <= 0:
        raise InfeasibleParametersError("f_g(tau1 v) must be positive")
    lack = 1.0 - f_at_xi1 / f_at_tau1v
    return ((g + (u / v) * xi1 * lack) * math.log(v / w)
            + lack * xi1 * (w / v) * (1.0 - u / w)
            - g * (u / w - u / v))


def bound_J_closed(g, params, f_at_tau1v, f_next_at_xi2, limits_g_plus_1):
    """Closed-form majorant of v J / (e^gamma f_g(tau1 v)); valid when xi2 >= beta_{g+1}."""
    v, w, u = params.v, params.w, params.u
    xi2 = params.xi2
    if xi2 < limits_g_plus_1.beta:
        raise HypothesisError(
            f"xi2 = {xi2:.6g} < beta_{g + 1} = {limits_g_plus_1.beta:.6g}")
    if f_at_tau1v <= 0:
        raise InfeasibleParametersError("f_g(tau1 v) must be positive")
    first = (v / E_GAMMA) * g * (math.log(w / u) - 1.0 + u / w) / f_at_tau1v
    second = (xi2 * g / (g + 1) * (u / E_GAMMA)
              * (1.0 - f_next_at_xi2) / f_at_tau1v * math.log(v / u))
    return first + second


def r_threshold(g, k, params, table_g, table_g_plus_1, method="exact", tol=QUAD_TOL):
    """Right-hand side of the admissibility condition r > threshold.

    ``method="exact"`` integrates I and J; ``method="closed"`` substitutes the
    closed-form majorants, which need xi1 >= beta_g and xi2 >= beta_{g+1}.
    """
    params.check()
    f_tau = table_g.f(params.tau1 * params.v)
    if f_tau <= 0:
        raise InfeasibleParametersError(
            f"tau1 v = {params.tau1 * params.v:.6g} <= beta_{g}: lower-bound sieve is void")
    gku = g * k * params.u
    if method == "exact":
        I_over_f = integral_I(g, params, table_g, tol) / f_tau
        J_term = params.v * integral_J(g, params, table_g_plus_1, tol) / (E_GAMMA * f_tau)
    elif method == "closed":
        I_over_f = bound_I_closed(g, params, f_tau, table_g.f(params.xi1), table_g.limits)
        J_term = bound_J_closed(g, params, f_tau, table_g_plus_1.f(params.xi2),
                                table_g_plus_1.limits)
    else:
        raise DomainError(f"unknown method {method!r}")
    threshold = gku - 1.0 + I_over_f + J_term
    r = minimal_r(threshold)
    return ThresholdBreakdown(gku, I_over_f, J_term, threshold, r + 1.0 - gku, r, method)


def M_of_v(g, k, v, beta_next):
    """gku + vg/C0 with u eliminated through the choice xi2 = beta_{g+1}."""
    b1 = beta_next - 1.0
    return g * k + b1 * g * k / (v - b1) + v * g / compute_C0()


@dataclass(frozen=True)
class AsymptoticParams:
    v: float
    u: float
    w: float
    M: float
    c1: float
    c2: float

    def __iter__(self):
        return iter((self.v, self.u, self.w, self.M, self.c1, self.c2))


def asymptotic_params(g, k, limits_g=None, limits_next=None):
    """Closed-form parameter choices for large k and the main term M(v)."""
    if k < 1:
        raise DomainError("k must be at least 1")
    limits_g = limits_g or get_limits(g)
    limits_next = limits_next or get_limits(g + 1)
    C0 = compute_C0()
    b1 = limits_next.beta - 1.0
    b2 = limits_g.beta - 1.0
    v = b1 + math.sqrt(C0 * b1 * k)
    u = 1.0 + b1 / (v - b1)
    w = 2.0 * (1.0 + 2.0 * b2 / (v - 2.0 * b2))
    M = g * k + g * k * (2.0 * math.sqrt(b1 / (C0 * k)) + b1 / (C0 * k))
    c1 = 2.0 * math.sqrt(b1 / (C0 * g))
    c2 = b1 / (C0 * g)
    return AsymptoticParams(v, u, w, M, c1, c2)


def ratio_N(limits_g, limits_next):
    """Smallest integer N >= 3 with N(beta_{g+1}-1) above the three critical points."""
    a = limits_next.beta - 1.0
    b = limits_g.beta - 1.0
    need = max(a, 2.0 * b, 4.0 * b - a)
    n = 3
    while n * a <= need:
        n += 1
    return n


def ratio_check(g, v, limits_g=None, limits_next=None):
    """w/u under the closed-form choices of u and w, and whether it lies in [4/3, 4]."""
    limits_g = limits_g or get_limits(g)
    limits_next = limits_next or get_limits(g + 1)
    a = limits_next.beta - 1.0
    b = 2.0 * (limits_g.beta - 1.0)
    if v <= max(a, b):
        raise DomainError(f"v = {v:.6g} must exceed max(beta_(g+1) - 1, 2(beta_g - 1)) = {max(a, b):.6g}")
    ratio = 2.0 * (v - a) / (v - b)
    return ratio, 4.0 / 3.0 - 1e-12 <= ratio <= 4.0 + 1e-12


__all__ = [
    "ParameterPoint", "ThresholdBreakdown", "AsymptoticParams",
    "compute_C0", "integral_F", "integral_I", "integral_J", "bound_I_closed",
    "bound_J_closed", "r_threshold", "minimal_r", "M_of_v", "asymptotic_params",
    "ratio_N", "ratio_check",
]
