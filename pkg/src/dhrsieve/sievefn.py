"""Ankeny-Onishi function, sifting limits and the DHR sieve functions.

The upper and lower sieve functions of dimension ``g`` solve the coupled
differential-delay system

    (u^g F(u))' = g u^(g-1) f(u-1)    for u > alpha
    (u^g f(u))' = g u^(g-1) F(u-1)    for u > beta

with ``F = 1/sigma`` on ``(0, alpha]`` and ``f = 0`` on ``(0, beta]``.  Both
systems are marched by the method of steps on Chebyshev panels whose
breakpoints are closed under unit shifts, so the delayed argument of a panel
is always another stored panel.
"""
from __future__ import annotations

import bisect
import csv
import functools
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import special
from scipy.interpolate import PchipInterpolator

from . import _spectral
from .exceptions import AccuracyError, ConvergenceError, DomainError

EULER_GAMMA = float(np.euler_gamma)
E_GAMMA = math.exp(EULER_GAMMA)

MAX_DIMENSION = 10
DEFAULT_STEP = 2.0 ** -10
# distance beyond alpha at which the shooting residuals are read
RESIDUAL_OFFSET = 12.0
GRID_START = 1.0

_EPS = 1e-11
# accuracy floor of the marched deviations F - 1 and 1 - f
_ROUNDING_FLOOR = 1e-14


def check_dimension(g):
    if isinstance(g, bool) or int(g) != g or g < 1:
        raise DomainError(f"sieve dimension must be a positive integer, got {g!r}")
    if g > MAX_DIMENSION:
        raise DomainError(f"sieve dimension {g} exceeds supported maximum {MAX_DIMENSION}")
    return int(g)


# ---------------------------------------------------------------------------
# Ankeny-Onishi sigma
# ---------------------------------------------------------------------------

class AnkenyOnishi:
    """sigma_g(u) = A u^g on (0, 2], continued by (u^-g sigma)' = -g u^(-g-1) sigma(u-2).

    Panels are the unit intervals [n, n+1] for n >= 2; the delay of 2 maps a
    panel onto an earlier panel, or onto the closed-form power segment.
    """

    def __init__(self, g, u_max=64.0):
        self.g = check_dimension(g)
        self.A = (2.0 * E_GAMMA) ** (-self.g) / math.factorial(self.g)
        self._values = []  # values on panel [n, n+1] stored at index n-2
        self._extend(u_max)

    @property
    def u_max(self):
        return 2.0 + len(self._values)

    def _extend(self, u_max):
        g = self.g
        while self.u_max < u_max:
            a = self.u_max
            b = a + 1.0
            t = _spectral.nodes(a, b)
            rhs = -g * t ** (-g - 1) * self._eval(t - 2.0)
            start = self.A if a == 2.0 else self._values[-1][-1] * a ** (-g)
            scaled = start + _spectral.cumulative(a, b, rhs)
            self._values.append(scaled * t ** g)

    def _eval(self, u):
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        low = u <= 2.0
        out[low] = self.A * u[low] ** self.g
        if not low.all():
            idx = np.minimum(np.ceil(u[~low]).astype(int) - 3, len(self._values) - 1)
            hi_u = u[~low]
            hi_out = np.empty_like(hi_u)
            for n in np.unique(idx):
                sel = idx == n
                a = 2.0 + n
                hi_out[sel] = _spectral.interpolate(a, a + 1.0, self._values[n], hi_u[sel])
            out[~low] = hi_out
        return out

    def __call__(self, u):
        arr = np.asarray(u, dtype=float)
        if np.any(arr <= 0):
            raise DomainError("sigma is defined for u > 0 only")
        top = float(arr.max()) if arr.size else 0.0
        if top > self.u_max:
            self._extend(math.ceil(top) + 1.0)
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def reciprocal(self, u):
        """1/sigma(u); uses the closed form on (0, 2]."""
        if u <= 2.0:
            if u <= 0:
                raise DomainError("sigma is defined for u > 0 only")
            return 1.0 / (self.A * u ** self.g)
        return 1.0 / self(u)


@functools.lru_cache(maxsize=None)
def ankeny_onishi(g):
    return AnkenyOnishi(g)


def sigma(g, u):
    """Ankeny-Onishi function of dimension g at u > 0 (scalar or array)."""
    return ankeny_onishi(check_dimension(g))(u)


# ---------------------------------------------------------------------------
# Method of steps for (F, f)
# ---------------------------------------------------------------------------

@dataclass
class _Steps:
    """Panel solution stored as deviations D = F - 1 and d = 1 - f.

    Keeping the deviations avoids the cancellation in F - 1 once the
    functions have converged.
    """

    breaks: np.ndarray
    upper_dev: np.ndarray  # F - 1 at panel nodes
    lower_dev: np.ndarray  # 1 - f at panel nodes

    def panel_of(self, u):
        i = np.searchsorted(self.breaks, u, side="left") - 1
        return np.clip(i, 0, len(self.breaks) - 2)

    def evaluate(self, u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        idx = self.panel_of(u)
        up = np.empty_like(u)
        lo = np.empty_like(u)
        for i in np.unique(idx):
            sel = idx == i
            a, b = self.breaks[i], self.breaks[i + 1]
            up[sel] = _spectral.interpolate(a, b, self.upper_dev[i], u[sel])
            lo[sel] = _spectral.interpolate(a, b, self.lower_dev[i], u[sel])
        return up, lo


def _breakpoints(alpha, beta, lo, hi):
    offsets = []
    for o in sorted((0.0, alpha % 1.0, beta % 1.0)):
        if o > 1.0 - _EPS:
            o = 0.0
        if all(abs(o - p) > _EPS for p in offsets):
            offsets.append(o)
    offsets.sort()
    pts = [n + o for n in range(lo, math.ceil(hi) + 2) for o in offsets]
    return np.array(pts), len(offsets)


def _march(g, alpha, beta, upper, sig):
    """Solve for F - 1 and 1 - f on panels covering [floor(beta) - 1, upper]."""
    lo = math.floor(beta) - 1
    breaks, period = _breakpoints(alpha, beta, lo, upper)
    npan = len(breaks) - 1
    up = np.empty((npan, _spectral.NODES))
    low = np.empty((npan, _spectral.NODES))
    for i in range(npan):
        a, b = breaks[i], breaks[i + 1]
        t = _spectral.nodes(a, b)
        tg = t ** g
        prev = i - period
        if b <= alpha + _EPS:
            up[i] = 1.0 / sig(t) - 1.0
        else:
            if prev < 0 or breaks[prev + 1] <= beta + _EPS:
                lag = np.ones_like(t)
            else:
                lag = low[prev]
            if abs(a - alpha) <= _EPS:
                g0 = a ** g * (1.0 / sig(a) - 1.0)
            else:
                g0 = a ** g * up[i - 1][-1]
            up[i] = (g0 - _spectral.cumulative(a, b, g * t ** (g - 1) * lag)) / tg
        if b <= beta + _EPS:
            low[i] = 1.0
        else:
            lag = up[prev]
            g0 = a ** g if abs(a - beta) <= _EPS else a ** g * low[i - 1][-1]
            low[i] = (g0 - _spectral.cumulative(a, b, g * t ** (g - 1) * lag)) / tg
        if b >= upper:
            breaks = breaks[: i + 2]
            up, low = up[: i + 1], low[: i + 1]
            break
    return _Steps(breaks, up, low)


# ---------------------------------------------------------------------------
# Sifting limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SieveLimits:
    alpha: float
    beta: float
    g: int
    source: str = "solved"

    def __post_init__(self):
        check_dimension(self.g)
        if self.source not in ("solved", "reference"):
            raise DomainError(f"unknown limits source {self.source!r}")
        if self.g == 1:
            if not (self.alpha == 2.0 and self.beta == 2.0):
                raise DomainError("dimension 1 has alpha = beta = 2")
        elif not (self.alpha > self.beta > 2.0):
            raise DomainError(
                f"sifting limits must satisfy alpha > beta > 2, got {self.alpha}, {self.beta}")


@functools.lru_cache(maxsize=None)
def _adjoint_q(g):
    """Coefficients (ascending) of the polynomial solution of
    (u q(u))' = g q(u) + g q(u+1), normalised to be monic of degree 2g - 1."""
    n = 2 * g - 1
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    for m in range(n - 1, -1, -1):
        acc = sum(c[j] * math.comb(j, m) for j in range(m + 1, n + 1))
        c[m] = Fraction(g) * acc / (m + 1 - 2 * g)
    return np.array([float(v) for v in c])


def _laplace_rule():
    x, w = np.polynomial.legendre.leggauss(32)
    edges = (0.0, 1.0, 3.0, 7.0, 13.0, 21.0, 31.0, 42.0)
    ys, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        ys.append(0.5 * (a + b) + 0.5 * (b - a) * x)
        ws.append(0.5 * (b - a) * w)
    y = np.concatenate(ys)
    return y, np.concatenate(ws) * np.exp(-y)


# nodes/weights for int_0^42 e^-y h(y) dy; the truncated tail is below 1e-18
_LAPLACE = _laplace_rule()


def _ein(x):
    """Entire exponential integral int_0^x (1 - e^-t)/t dt."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    small = (x > 0) & (x < 0.5)
    xs = x[small]
    term = xs.copy()
    acc = xs.copy()
    for k in range(2, 20):
        term = -term * xs / k
        acc = acc + term / k
    out[small] = acc
    big = x >= 0.5
    out[big] = EULER_GAMMA + np.log(x[big]) + special.exp1(x[big])
    return out


def _adjoint_p(g, u):
    """p(u) = int_0^inf exp(-u x - g Ein(x)) dx, the adjoint solution ~ 1/u."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    y, w = _LAPLACE
    vals = np.exp(-g * _ein(y[None, :] / u[:, None]))
    return (vals @ w) / u


def limit_conditions(g, alpha, beta):
    """Adjoint conditions that pin down (alpha, beta).

    With P = F + f and Q = F - f the pairings

        <P, p>(u) = u P(u) p(u) + g int_{u-1}^{u} P(t) p(t+1) dt
        <Q, q>(u) = u Q(u) q(u) - g int_{u-1}^{u} Q(t) q(t+1) dt

    are constant for u >= alpha.  F, f -> 1 forces <P, p> = 2 and <Q, q> = 0,
    and both can be read off at u = alpha where only the initial segments
    enter.  Returns the two residuals (the second scaled by alpha q(alpha)).
    """
    sig = ankeny_onishi(g)
    steps = _march(g, alpha, beta, alpha, sig)
    q = np.polynomial.Polynomial(_adjoint_q(g))
    cp_int = 0.0
    cq_int = 0.0
    for i in range(len(steps.breaks) - 1):
        a, b = steps.breaks[i], steps.breaks[i + 1]
        if a < alpha - 1.0 - _EPS or b > alpha + _EPS:
            continue
        t = _spectral.nodes(a, b)
        P = 2.0 + steps.upper_dev[i] - steps.lower_dev[i]
        Q = steps.upper_dev[i] + steps.lower_dev[i]
        cp_int += _spectral.integrate(a, b, P * _adjoint_p(g, t + 1.0))
        cq_int += _spectral.integrate(a, b, Q * q(t + 1.0))
    P_a = 2.0 + steps.upper_dev[-1][-1] - steps.lower_dev[-1][-1]
    Q_a = steps.upper_dev[-1][-1] + steps.lower_dev[-1][-1]
    cp = alpha * P_a * _adjoint_p(g, alpha)[0] + g * cp_int - 2.0
    qa = q(alpha)
    cq = (alpha * Q_a * qa - g * cq_int) / (alpha * qa)
    return np.array([cp, cq])


def shooting_residuals(g, alpha, beta, offset=RESIDUAL_OFFSET):
    """(F(U) - 1, f(U) - 1) at U = alpha + offset from forward integration."""
    upper = alpha + offset
    steps = _march(g, alpha, beta, upper, ankeny_onishi(g))
    up, lo = steps.evaluate(upper)
    return float(up[0]), float(-lo[0])


def _initial_guess(g):
    beta = 2.445 * g - 0.65
    return np.array([beta + 0.72 * g - 0.4, beta])


def solve_sieve_limits(g, tol=1e-8, max_iter=60):
    """Sifting limits (alpha_g, beta_g) by damped Newton on the adjoint conditions.

    The answer is accepted only if forward integration from the solved limits
    leaves |F(U) - 1| and |f(U) - 1| below ``tol`` at U = alpha + 12.
    """
    g = check_dimension(g)
    if tol <= 0:
        raise DomainError("tol must be positive")
    if g == 1:
        return SieveLimits(2.0, 2.0, 1, "solved")

    x = _initial_guess(g)
    res = limit_conditions(g, *x)
    h = 1e-6
    for _ in range(max_iter):
        jac = np.empty((2, 2))
        for j in range(2):
            dx = np.zeros(2)
            dx[j] = h
            jac[:, j] = (limit_conditions(g, *(x + dx)) - limit_conditions(g, *(x - dx))) / (2 * h)
        try:
            delta = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian for g={g}", residuals=res) from exc
        lam = 1.0
        while True:
            trial = x + lam * delta
            if trial[0] > trial[1] > 2.0:
                trial_res = limit_conditions(g, *trial)
                if np.linalg.norm(trial_res) < np.linalg.norm(res) or lam < 1e-3:
                    break
            lam *= 0.5
            if lam < 1e-6:
                raise ConvergenceError(f"line search failed for g={g}", residuals=res)
        x, res = trial, trial_res
        if np.max(np.abs(lam * delta)) < 1e-13 or np.max(np.abs(res)) < 1e-15:
            break
    else:
        raise ConvergenceError(f"sifting limits for g={g} did not converge", residuals=res)

    alpha, beta = float(x[0]), float(x[1])
    shoot = shooting_residuals(g, alpha, beta)
    if max(abs(shoot[0]), abs(shoot[1])) > tol:
        raise ConvergenceError(
            f"forward residuals {shoot} exceed tol={tol} for g={g}", residuals=shoot)
    return SieveLimits(alpha, beta, g, "solved")


def _reference_text():
    return resources.files("dhrsieve.data").joinpath("sifting_limits.dat").read_text()


def parse_limits_file(text):
    """Rows of ``g alpha beta``; blank lines and ``#`` comments are skipped."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise DomainError(f"line {lineno}: expected 'g alpha beta', got {line!r}")
        g = int(parts[0])
        out[g] = SieveLimits(float(parts[1]), float(parts[2]), g, "reference")
    return out


@functools.lru_cache(maxsize=None)
def reference_limits():
    return parse_limits_file(_reference_text())


def load_reference_limits(path=None):
    if path is None:
        return dict(reference_limits())
    return parse_limits_file(Path(path).read_text())


@functools.lru_cache(maxsize=None)
def _solved(g):
    return solve_sieve_limits(g)


def get_limits(g, source="reference"):
    """Sifting limits from the shipped data file or the solver."""
    g = check_dimension(g)
    if source == "reference":
        try:
            return reference_limits()[g]
        except KeyError:
            return _solved(g)
    if source == "solved":
        return _solved(g)
    raise DomainError(f"unknown limits source {source!r}")


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

class _Piece:
    """Monotone cubic on sorted knots with exact running integrals."""

    def __init__(self, x, y):
        self.interp = PchipInterpolator(x, y, extrapolate=False)
        self.knots = [float(t) for t in x]
        c = self.interp.c
        self.coef = [list(map(float, col)) for col in c.T]
        h = np.diff(x)
        cells = ((c[0] * h / 4 + c[1] / 3) * h + c[2] / 2) * h * h + c[3] * h
        self.cum = [0.0] + list(map(float, np.cumsum(cells)))

    def _cell(self, u):
        j = bisect.bisect_right(self.knots, u) - 1
        j = min(max(j, 0), len(self.coef) - 1)
        return j, u - self.knots[j], self.coef[j]

    def __call__(self, u):
        _, dx, c = self._cell(u)
        return ((c[0] * dx + c[1]) * dx + c[2]) * dx + c[3]

    def primitive(self, u):
        # integral from the first knot to u
        j, dx, c = self._cell(u)
        return self.cum[j] + (((c[0] * dx / 4 + c[1] / 3) * dx + c[2] / 2) * dx + c[3]) * dx


def _split(grid, values, at, value_at):
    # knots on either side of a derivative jump, sharing the jump point
    left, right = grid < at, grid > at
    xl, yl = np.append(grid[left], at), np.append(values[left], value_at)
    xr, yr = np.insert(grid[right], 0, at), np.insert(values[right], 0, value_at)
    return (xl, yl), (xr, yr)


@dataclass(frozen=True, eq=False)
class SieveFunctionTable:
    """F_g and f_g sampled on the uniform grid start + j*step, j = 0..n-1.

    Evaluation between grid points uses monotone piecewise-cubic (PCHIP)
    interpolation, which keeps F >= 1 >= f >= 0 and the monotonicity of the
    samples.  F' jumps at alpha and f' at beta, so the interpolants are split
    there instead of being smoothed across the corner.  Immutable once built.
    """

    g: int
    limits: SieveLimits
    u_max: float
    step: float
    F_values: np.ndarray
    f_values: np.ndarray
    start: float = GRID_START
    _pieces: tuple = field(init=False, repr=False)

    def __post_init__(self):
        for arr in (self.F_values, self.f_values):
            arr.setflags(write=False)
        grid = self.grid
        alpha, beta = self.limits.alpha, self.limits.beta
        if not self.start < beta <= alpha < self.u_max:
            raise DomainError("table grid must straddle beta <= alpha")
        F_alpha = ankeny_onishi(self.g).reciprocal(alpha)
        (xl, yl), (xr, yr) = _split(grid, self.F_values, alpha, F_alpha)
        _, (xf, yf) = _split(grid, self.f_values, beta, 0.0)
        object.__setattr__(self, "_pieces", (_Piece(xl, yl), _Piece(xr, yr), _Piece(xf, yf)))

    @property
    def grid(self):
        return self.start + self.step * np.arange(len(self.F_values))

    @property
    def alpha(self):
        return self.limits.alpha

    @property
    def beta(self):
        return self.limits.beta

    def _F_primitive(self, u):
        # int_start^u of the F interpolant, for start <= u <= u_max
        left, right, _ = self._pieces
        if u <= self.alpha:
            return left.primitive(u)
        return left.cum[-1] + right.primitive(u)

    def integrate_F(self, a, b):
        """int_a^b F(t) dt for start <= a <= b, exact for the interpolant."""
        if a < self.start:
            raise DomainError(f"integrate_F needs a >= {self.start}")
        if b <= a:
            return 0.0
        top = self.u_max
        total = max(b - max(a, top), 0.0)
        if a < top:
            total += self._F_primitive(min(b, top)) - self._F_primitive(a)
        return total

    def F(self, u):
        """Upper sieve function; scalar fast path, vectorised for arrays."""
        if type(u) is not float and np.ndim(u):
            return _vector_eval(self, np.asarray(u, dtype=float), upper=True)
        if u <= 0:
            raise DomainError("F is defined for u > 0 only")
        if u < self.start:
            return ankeny_onishi(self.g).reciprocal(u)
        if u >= self.u_max:
            return 1.0
        left, right, _ = self._pieces
        return left(u) if u <= self.alpha else right(u)

    def f(self, u):
        """Lower sieve function; scalar fast path, vectorised for arrays."""
        if type(u) is not float and np.ndim(u):
            return _vector_eval(self, np.asarray(u, dtype=float), upper=False)
        if u <= 0:
            raise DomainError("f is defined for u > 0 only")
        if u <= self.limits.beta:
            return 0.0
        if u >= self.u_max:
            return 1.0
        return self._pieces[2](u)

    def to_csv(self, out=None):
        """Write ``u,F,f`` rows; returns the text when ``out`` is None."""
        buf = io.StringIO() if out is None else out
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["u", "F", "f"])
        for u, F, f in zip(self.grid, self.F_values, self.f_values):
            writer.writerow([repr(float(u)), repr(float(F)), repr(float(f))])
        return buf.getvalue() if out is None else None


def _vector_eval(table, u, upper):
    if np.any(u <= 0):
        raise DomainError("sieve functions are defined for u > 0 only")
    out = np.ones_like(u)
    inside = (u >= table.start) & (u < table.u_max)
    left, right, lower = table._pieces
    if upper:
        low, high = inside & (u <= table.alpha), inside & (u > table.alpha)
        out[low] = left.interp(u[low])
        out[high] = right.interp(u[high])
        below = u < table.start
        if below.any():
            out[below] = 1.0 / ankeny_onishi(table.g)(u[below])
    else:
        high = inside & (u > table.beta)
        out[high] = lower.interp(u[high])
        out[u <= table.beta] = 0.0
    return out


def build_sieve_function_table(g, limits=None, u_max=None, step=DEFAULT_STEP):
    """Tabulate F_g, f_g on [1, u_max] with uniform spacing ``step``.

    The panel solution is evaluated at the grid points; see the module
    docstring for the marching scheme.
    """
    g = check_dimension(g)
    if limits is None:
        limits = get_limits(g)
    if limits.g != g:
        raise DomainError(f"limits are for g={limits.g}, table requested for g={g}")
    alpha, beta = limits.alpha, limits.beta
    if u_max is None:
        # the O(e^-u) tail of F - 1 is slower for the larger dimensions
        u_max = alpha + RESIDUAL_OFFSET + (4.0 if g > 5 else 0.0)
    if u_max < alpha + RESIDUAL_OFFSET - 1e-12:
        raise DomainError(f"u_max must be at least alpha + {RESIDUAL_OFFSET:g}")
    if not 0 < step <= 2.0 ** -8:
        raise DomainError("step must lie in (0, 2^-8]")

    n = int(math.floor((u_max - GRID_START) / step + 1e-9)) + 1
    grid = GRID_START + step * np.arange(n)
    u_max = float(grid[-1])

    sig = ankeny_onishi(g)
    steps = _march(g, alpha, beta, u_max, sig)
    # points below the first panel lie inside both initial segments
    up_dev = np.zeros_like(grid)
    lo_dev = np.zeros_like(grid)
    marched = grid >= steps.breaks[0]
    up_dev[marched], lo_dev[marched] = steps.evaluate(grid[marched])
    worst = min(up_dev.min(), lo_dev.min())
    if worst < -_ROUNDING_FLOOR:
        raise AccuracyError(f"sandwich violated by {worst:.3e} beyond rounding")
    # the converged tail sits at the rounding floor; keep it on the right side of 1
    F = 1.0 + np.maximum(up_dev, 0.0)
    f = 1.0 - np.maximum(lo_dev, 0.0)
    init_F = grid <= alpha
    F[init_F] = 1.0 / sig(grid[init_F])
    f[grid <= beta] = 0.0

    tail = max(10.0 * math.exp(-u_max), _ROUNDING_FLOOR)
    if abs(F[-1] - 1.0) > tail or abs(1.0 - f[-1]) > tail:
        raise AccuracyError(
            f"tail residuals {F[-1] - 1.0:.3e}, {1.0 - f[-1]:.3e} exceed 10 e^-u at u={u_max}")
    return SieveFunctionTable(g, limits, u_max, float(step), F, f)


@functools.lru_cache(maxsize=None)
def sieve_table(g, source="reference", u_max=None, step=DEFAULT_STEP):
    """Cached table keyed by dimension, limits source and grid."""
    return build_sieve_function_table(g, get_limits(g, source), u_max, step)


def eval_F(table, u):
    return table.F(u)


def eval_f(table, u):
    return table.f(u)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def dde_residuals(table):
    """Centred-difference residuals of both delay equations on the grid.

    Returns (upper, lower): arrays of |D(u^g F) - g u^(g-1) f(u-1)| divided by
    1 + |g u^(g-1) f(u-1)|, and the analogue for f, at interior grid points
    u > alpha (resp. beta) whose three-point stencil contains no derivative
    jump.  Jumps of the right-hand sides sit at alpha and beta + 1 for the F
    equation and at beta and alpha + 1 for the f equation.
    """
    g = table.g
    u = table.grid
    h = table.step
    F, f = table.F_values, table.f_values
    alpha, beta = table.alpha, table.beta

    def clean(lo, jumps):
        idx = np.arange(1, len(u) - 1)
        keep = u[idx] - h > lo
        for j in jumps:
            keep &= np.abs(u[idx] - j) >= h
        return idx[keep]

    out = []
    for G, lag, lo, jumps in ((F, table.f, alpha, (alpha, beta + 1.0)),
                              (f, table.F, beta, (beta, alpha + 1.0))):
        idx = clean(lo, jumps)
        diff = (u[idx + 1] ** g * G[idx + 1] - u[idx - 1] ** g * G[idx - 1]) / (2 * h)
        rhs = g * u[idx] ** (g - 1) * lag(u[idx] - 1.0)
        out.append(np.abs(diff - rhs) / (1.0 + np.abs(rhs)))
    return out[0], out[1]
