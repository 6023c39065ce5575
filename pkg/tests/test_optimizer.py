import math

import pytest

from dhrsieve.bounds import ParameterPoint, r_threshold
from dhrsieve.exceptions import InfeasibleParametersError, NoRootError
from dhrsieve.optimizer import (CLASSICAL_R, Infeasible, cell_status, classical_r,
                                compute_cells, evaluate_v, format_csv, format_json,
                                format_text, minimize_r, parse_csv, published_r, solve_u,
                                solve_w, u_balance)
from dhrsieve.sievefn import E_GAMMA, get_limits

from conftest import PUBLISHED_CELLS


@pytest.mark.parametrize("g, k, r", [(2, 3, 15), (2, 14, 43), (3, 4, 30), (4, 14, 100)])
def test_anchor_cells(grid_cells, g, k, r):
    assert grid_cells[(g, k)].r == r


def test_published_cells(grid_cells):
    misses = [(g, k) for g, k in PUBLISHED_CELLS if grid_cells[(g, k)].r != published_r(g, k)]
    assert not misses


def test_embedded_reference_values():
    assert classical_r(3, 1) == 12
    assert classical_r(2, 14) == 60
    assert classical_r(5, 1) is None
    assert published_r(2, 1) is None
    assert all(len(row) == 14 for row in CLASSICAL_R.values())


@pytest.mark.parametrize("g", [2, 3])
@pytest.mark.parametrize("n", [3, 10, 30])
def test_solve_w_residual(tables, g, n):
    tg, tn = tables[g], tables[g + 1]
    v = tg.alpha + n
    w, bracket = solve_w(g, v, tg, tn, with_bracket=True)
    assert 2 < w < v
    assert bracket[0] <= w <= bracket[1]
    assert abs(tg.F(v * (0.5 - 1 / w)) - v / E_GAMMA * tn.F(v * (1 - 1 / w))) <= 1e-8


@pytest.mark.parametrize("g, n", [(2, 20), (2, 60), (3, 40)])
def test_solve_w_large_v_lands_on_initial_segment(tables, g, n):
    tg, tn = tables[g], tables[g + 1]
    v = tg.alpha + n
    w = solve_w(g, v, tg, tn)
    assert v * (0.5 - 1 / w) < tg.alpha


def test_solve_w_needs_room(tables):
    with pytest.raises(NoRootError):
        solve_w(2, 1.5, tables[2], tables[3])


@pytest.mark.parametrize("g, k", [(2, 3), (2, 10), (3, 7), (4, 12)])
def test_stationary_point_is_local_minimum(grid_cells, tables, g, k):
    cell = grid_cells[(g, k)]
    p = cell.params
    tg, tn = tables[g], tables[g + 1]
    base = cell.threshold
    for dw in (-1e-3, 1e-3):
        q = ParameterPoint(p.v, p.w + dw, p.u)
        assert r_threshold(g, k, q, tg, tn).threshold >= base - 1e-10
    for du in (-1e-3, 1e-3):
        q = ParameterPoint(p.v, p.w, p.u + du)
        assert r_threshold(g, k, q, tg, tn).threshold >= base - 1e-10


def test_u_balance_is_threshold_derivative(tables):
    # phi(u) * g / f_g(v/2) equals d threshold / du
    g, k = 2, 5
    tg, tn = tables[2], tables[3]
    v = tg.alpha + 8
    w = solve_w(g, v, tg, tn)
    phi = u_balance(g, k, v, w, tg, tn)
    u, h = 1.5, 1e-5
    up = r_threshold(g, k, ParameterPoint(v, w, u + h), tg, tn).threshold
    dn = r_threshold(g, k, ParameterPoint(v, w, u - h), tg, tn).threshold
    assert (up - dn) / (2 * h) == pytest.approx(g * phi(u) / tg.f(v / 2), rel=1e-5)


@pytest.mark.parametrize("g, k", [(2, 3), (3, 6), (4, 14)])
def test_u_in_open_interval(grid_cells, g, k):
    u = grid_cells[(g, k)].params.u
    assert 1 < u < 2


def test_u_decreases_with_k_toward_one(tables):
    g = 2
    tg, tn = tables[2], tables[3]
    v = tg.alpha + 8
    w = solve_w(g, v, tg, tn)
    us = [solve_u(g, k, v, w, tg, tn) for k in (3, 10, 100, 10 ** 4)]
    assert all(a > b for a, b in zip(us, us[1:]))
    assert 1 < us[-1] < 1.01


def test_evaluate_v_reports_brackets(tables):
    params, breakdown, brackets = evaluate_v(2, 4, tables[2].alpha + 7, tables[2], tables[3])
    assert set(brackets) == {"w", "u"}
    assert brackets["u"][0] <= params.u <= brackets["u"][1]
    assert breakdown.r == math.floor(breakdown.threshold) + 1


def test_evaluate_v_void_lower_sieve(tables):
    with pytest.raises(InfeasibleParametersError):
        evaluate_v(2, 4, 8.0, tables[2], tables[3])


def test_result_invariants(grid_cells):
    for (g, k), cell in grid_cells.items():
        if isinstance(cell, Infeasible):
            assert cell.r is None
            continue
        p = cell.params
        assert p.is_ordered()
        assert cell.r == math.floor(cell.threshold + 1e-9) + 1
        assert cell.breakdown.eta > 0
        assert cell.n_star >= 1
        assert p.v == get_limits(g).alpha + cell.n_star
        if k >= 4:
            assert cell.r <= cell.classical_r


def test_improvement_over_classical(grid_cells):
    for g, k in PUBLISHED_CELLS:
        if k >= 4:
            assert grid_cells[(g, k)].r < classical_r(g, k)


def test_dash_cells(grid_cells):
    assert cell_status(grid_cells[(3, 1)]) == "infeasible"
    assert cell_status(grid_cells[(2, 1)]) == "no_improvement"
    assert cell_status(grid_cells[(2, 3)]) == "ok"
    for g, k in PUBLISHED_CELLS:
        assert cell_status(grid_cells[(g, k)]) == "ok"
    blanks = [(g, k) for (g, k) in grid_cells if published_r(g, k) is None]
    assert all(cell_status(grid_cells[c]) != "ok" for c in blanks)


def test_all_infeasible_raises():
    with pytest.raises(InfeasibleParametersError, match="no feasible v"):
        minimize_r(3, 1, n_max=5)


def test_determinism_across_workers():
    one = compute_cells([2], [3, 5], workers=1)
    two = compute_cells([2], [3, 5], workers=2)
    assert [c.to_dict() for c in one] == [c.to_dict() for c in two]
    assert format_json(one) == format_json(two)


def test_csv_round_trip(grid_cells):
    cells = [grid_cells[key] for key in sorted(grid_cells)]
    rows = parse_csv(format_csv(cells))
    assert len(rows) == len(cells)
    for row, cell in zip(rows, cells):
        assert (row["g"], row["k"], row["r"], row["classical_r"]) == \
            (cell.g, cell.k, cell.r, cell.classical_r)
        if cell.r is not None:
            assert row["v"] == cell.params.v and row["w"] == cell.params.w
            assert row["u"] == cell.params.u and row["threshold"] == cell.threshold
        else:
            assert row["v"] is None


def test_text_table_layout(grid_cells):
    cells = [grid_cells[key] for key in sorted(grid_cells)]
    text = format_text(cells)
    lines = text.splitlines()
    row = next(line for line in lines if line.startswith("2 computed")).split()[2:]
    assert row[:2] == ["--", "--"]
    assert row[2] == "15" and row[-1] == "43"
    classical = next(line for line in lines if line.startswith("3 classical")).split()[2:]
    assert classical[0] == "12"
    delta = next(line for line in lines if line.startswith("2 delta")).split()[2:]
    assert delta[-1] == "-17"


def test_json_marks_status(grid_cells):
    import json
    cells = [grid_cells[(3, 1)], grid_cells[(2, 14)]]
    doc = json.loads(format_json(cells))
    assert "idealised" in doc["note"]
    assert doc["cells"][0]["status"] == "infeasible" and doc["cells"][0]["r"] is None
    assert doc["cells"][1]["r"] == 43 and doc["cells"][1]["published_r"] == 43
