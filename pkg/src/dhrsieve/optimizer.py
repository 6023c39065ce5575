"""Search for the smallest admissible r over the grid v = alpha_g + n."""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bounds import ParameterPoint, ThresholdBreakdown, integral_F, r_threshold
from .exceptions import InfeasibleParametersError, NoRootError, SieveError
from .numerics import find_root
from .sievefn import E_GAMMA, sieve_table

log = logging.getLogger(__name__)

N_MAX = 400
PATIENCE = 25
ROOT_TOL = 1e-12
W_SCAN = 64

# Irving-method values; None marks cells left empty.
PUBLISHED_R = {
    2: [None, None, 15, 18, 21, 23, 26, 29, 31, 33, 36, 38, 40, 43],
    3: [None, None, None, 30, 35, 39, 43, 47, 51, 55, 59, 62, 66, 70],
    4: [None, None, None, 43, 50, 56, 63, 68, 74, 79, 85, 90, 95, 100],
}

# Classical admissible values (embedded reference data, k = 1..14).
CLASSICAL_R = {
    2: [7, 11, 16, 20, 24, 28, 32, 36, 40, 44, 48, 52, 56, 60],
    3: [12, 19, 25, 32, 38, 44, 50, 56, 62, 69, 75, 81, 87, 93],
    4: [17, 27, 35, 44, 52, 61, 69, 77, 86, 94, 102, 110, 118, 126],
}


def published_r(g, k):
    row = PUBLISHED_R.get(g)
    if row is None or not 1 <= k <= len(row):
        return None
    return row[k - 1]


def classical_r(g, k):
    row = CLASSICAL_R.get(g)
    if row is None or not 1 <= k <= len(row):
        return None
    return row[k - 1]


@dataclass(frozen=True)
class AdmissibleResult:
    g: int
    k: int
    r: int
    params: ParameterPoint
    breakdown: ThresholdBreakdown
    n_star: int
    classical_r: int | None = None
    brackets: dict = field(default_factory=dict, compare=False)

    @property
    def threshold(self):
        return self.breakdown.threshold

    def to_dict(self):
        return {
            "g": self.g, "k": self.k, "r": self.r, "n_star": self.n_star,
            "classical_r": self.classical_r,
            "params": self.params.to_dict(),
            "breakdown": self.breakdown.to_dict(),
            "brackets": {k: list(v) for k, v in self.brackets.items()},
        }


@dataclass(frozen=True)
class Infeasible:
    """A table cell where no grid point gave valid (w, u)."""

    g: int
    k: int
    reasons: tuple
    classical_r: int | None = None

    r = None


def _tables(g, source):
    return sieve_table(g, source), sieve_table(g + 1, source)


def solve_w(g, v, table_g, table_g_plus_1, tau1=0.5, tau2=1.0, with_bracket=False):
    """Stationary point in w of the threshold:
    F_g(v(tau1 - 1/w)) = (v / e^gamma) F_{g+1}(v(tau2 - 1/w)), w in (1/tau1, v).
    """
    if v * tau1 <= 1.0:
        raise NoRootError(f"v = {v} leaves no room for w")
    Fg, Fn = table_g.F, table_g_plus_1.F
    scale = v / E_GAMMA

    def h(w):
        return Fg(v * (tau1 - 1.0 / w)) - scale * Fn(v * (tau2 - 1.0 / w))

    # left end: argument of F_g equal to 1e-6 where F_g is enormous
    lo = 1.0 / (tau1 - 1e-6 / v)
    w, bracket = find_root(h, lo, v, xtol=ROOT_TOL, scan=W_SCAN, label=f"w(v={v:.6g})")
    return (w, bracket) if with_bracket else w


def u_balance(g, k, v, w, table_g, table_g_plus_1, tau1=0.5, tau2=1.0):
    """phi(u) with d threshold/du = (g / f_g(tau1 v)) phi(u).

    phi(u) = k f_g(tau1 v) - int_w^v F_g(v(tau1 - 1/s)) ds/s^2
             - (v/e^gamma) int_u^w F_{g+1}(v(tau2 - 1/s)) ds/s^2,
    where both integrals are rewritten in the argument t of F, ds/s^2 = dt/v.
    """
    f_tau = table_g.f(tau1 * v)
    fixed = k * f_tau - integral_F(table_g, v * (tau1 - 1.0 / w), v * tau1 - 1.0) / v
    top = v * (tau2 - 1.0 / w)

    def phi(u):
        return fixed - integral_F(table_g_plus_1, v * (tau2 - 1.0 / u), top) / E_GAMMA

    return phi


def solve_u(g, k, v, w, table_g, table_g_plus_1, tau1=0.5, tau2=1.0, with_bracket=False):
    """Stationary point in u of the threshold, u in (1/tau2, min(1/tau1, w))."""
    phi = u_balance(g, k, v, w, table_g, table_g_plus_1, tau1, tau2)
    lo = 1.0 / (tau2 - 1e-9 / v)
    hi = min(1.0 / tau1, w) * (1.0 - 1e-12)
    u, bracket = find_root(phi, lo, hi, xtol=ROOT_TOL, label=f"u(v={v:.6g}, w={w:.6g})")
    return (u, bracket) if with_bracket else u


def evaluate_v(g, k, v, table_g, table_g_plus_1, tau1=0.5, tau2=1.0):
    """Parameters and threshold breakdown at one v."""
    if table_g.f(tau1 * v) <= 0:
        raise InfeasibleParametersError(f"tau1 v = {tau1 * v:.6g} <= beta_{g}")
    w, wb = solve_w(g, v, table_g, table_g_plus_1, tau1, tau2, with_bracket=True)
    u, ub = solve_u(g, k, v, w, table_g, table_g_plus_1, tau1, tau2, with_bracket=True)
    params = ParameterPoint(v, w, u, tau1, tau2)
    breakdown = r_threshold(g, k, params, table_g, table_g_plus_1)
    return params, breakdown, {"w": wb, "u": ub}


def minimize_r(g, k, n_max=N_MAX, source="reference", tables=None, patience=PATIENCE):
    """Minimal admissible r for the cell (g, k) over v = alpha_g + n, n = 1..n_max.

    Stops early once the threshold has risen for ``patience`` consecutive
    feasible n.  Ties go to the smaller n.
    """
    table_g, table_next = tables or _tables(g, source)
    alpha = table_g.limits.alpha
    best = None
    failures = []
    prev = None
    rising = 0
    for n in range(1, n_max + 1):
        v = alpha + n
        try:
            params, breakdown, brackets = evaluate_v(g, k, v, table_g, table_next)
        except SieveError as exc:
            failures.append((n, str(exc)))
            continue
        if best is None or breakdown.threshold < best[1].threshold:
            best = (params, breakdown, n, brackets)
        if prev is not None and breakdown.threshold > prev:
            rising += 1
            if rising >= patience:
                break
        else:
            rising = 0
        prev = breakdown.threshold
    if best is None:
        raise InfeasibleParametersError(
            f"no feasible v for g={g}, k={k}: " + "; ".join(f"n={n}: {m}" for n, m in failures[:5]))
    params, breakdown, n_star, brackets = best
    return AdmissibleResult(g, k, breakdown.r, params, breakdown, n_star,
                            classical_r(g, k), brackets)


def _cell(args):
    g, k, n_max, source = args
    try:
        return minimize_r(g, k, n_max, source)
    except InfeasibleParametersError as exc:
        return Infeasible(g, k, (str(exc),), classical_r(g, k))


def compute_cells(g_values, k_values, n_max=N_MAX, source="reference", workers=1):
    """All cells in (g, k) order; cells are independent and may run in parallel."""
    jobs = [(g, k, n_max, source) for g in g_values for k in k_values]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cell, jobs))
    return [_cell(job) for job in jobs]


CSV_FIELDS = ["g", "k", "r", "classical_r", "v", "w", "u", "threshold"]


def cell_status(cell):
    """Cell status: "infeasible", "no_improvement" (r not below classical) or "ok".

    The published table leaves both kinds of cell empty.
    """
    if isinstance(cell, Infeasible):
        return "infeasible"
    if cell.classical_r is not None and cell.r >= cell.classical_r:
        return "no_improvement"
    return "ok"


def _csv_row(cell):
    if isinstance(cell, Infeasible):
        return [cell.g, cell.k, "", _blank(cell.classical_r), "", "", "", ""]
    p = cell.params
    return [cell.g, cell.k, cell.r, _blank(cell.classical_r), repr(p.v), repr(p.w),
            repr(p.u), repr(cell.threshold)]


def _blank(x):
    return "" if x is None else x


def format_csv(cells):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for cell in cells:
        writer.writerow(_csv_row(cell))
    return buf.getvalue()


def parse_csv(text):
    """Inverse of :func:`format_csv`: list of dicts with typed values."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {}
        for key in CSV_FIELDS:
            val = row[key]
            if val == "":
                rec[key] = None
            elif key in ("g", "k", "r", "classical_r"):
                rec[key] = int(val)
            else:
                rec[key] = float(val)
        out.append(rec)
    return out


def format_json(cells):
    docs = []
    for cell in cells:
        if isinstance(cell, Infeasible):
            docs.append({"g": cell.g, "k": cell.k, "r": None, "classical_r": cell.classical_r,
                         "status": "infeasible", "reasons": list(cell.reasons)})
        else:
            d = cell.to_dict()
            d["status"] = cell_status(cell)
            d["published_r"] = published_r(cell.g, cell.k)
            docs.append(d)
    note = "error terms dropped; r values are idealised, not rigorous"
    return json.dumps({"note": note, "cells": docs}, indent=2, sort_keys=True) + "\n"


def format_text(cells):
    """Aligned grid: computed r per g, then the classical row and deltas.

    Cells that are infeasible or do not improve on the classical value are
    shown as "--" in the computed row.
    """
    gs = sorted({c.g for c in cells})
    ks = sorted({c.k for c in cells})
    by = {(c.g, c.k): c for c in cells}
    width = max(4, max(len(str(k)) for k in ks) + 1)

    def line(label, values):
        return f"{label:<12}" + "".join(f"{v:>{width}}" for v in values)

    rows = [line("g \\ k", ks)]
    for g in gs:
        rows.append(line(f"{g} computed", [_shown(by[g, k]) for k in ks]))
        rows.append(line(f"{g} classical", [_dash(by[g, k].classical_r) for k in ks]))
        rows.append(line(f"{g} delta", [_delta(by[g, k]) for k in ks]))
    return "\n".join(rows) + "\n"


def _shown(cell):
    return str(cell.r) if cell_status(cell) == "ok" else "--"


def _dash(x):
    return "--" if x is None else str(x)


def _delta(cell):
    if cell.r is None or cell.classical_r is None:
        return "--"
    return f"{cell.r - cell.classical_r:+d}"


def generate_table(g_range, k_range, fmt="text", n_max=N_MAX, source="reference", workers=1):
    """Computed grid with classical reference values, as csv, json or text."""
    cells = compute_cells(list(g_range), list(k_range), n_max, source, workers)
    formatter = {"csv": format_csv, "json": format_json, "text": format_text}.get(fmt)
    if formatter is None:
        raise ValueError(f"unknown format {fmt!r}")
    return formatter(cells)
