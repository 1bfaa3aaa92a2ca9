import math

import numpy as np
import pytest

from cweno1d.cweno import cweno3_disc_ratio_closed_form
from cweno1d.grid import make_random_nonuniform, make_uniform
from cweno1d.harness import (ConvergenceRow, ScanRow, cell_averages,
                             convergence_rates, error_1norm, read_csv,
                             restrict_to, run_convergence, run_disc_scan,
                             run_lake_at_rest, run_named_test,
                             run_property_r, total_variation, write_csv,
                             write_solution_csv)
from cweno1d.solver import Field


# ---------------------------------------------------------------- oracles

def test_rate_extraction_on_synthetic_errors():
    for s in (1.0, 2.5, 7.0):
        ns = [10, 20, 40, 80]
        errs = [3.7 * n ** -s for n in ns]
        rates = convergence_rates(ns, errs)
        assert math.isnan(rates[0])
        assert np.abs(np.array(rates[1:]) - s).max() <= 1e-10
    # non-doubling resolutions
    ns = [10, 30, 90]
    errs = [2.0 * n ** -4.0 for n in ns]
    assert np.abs(np.array(convergence_rates(ns, errs)[1:]) - 4.0).max() \
        <= 1e-10


def test_error_1norm_trivials():
    grid = make_uniform(0.0, 1.0, 37)
    u = np.sin(grid.centers)[:, None]
    f = Field(grid, u)
    assert error_1norm(f, Field(grid, u.copy())) == 0.0
    # constant offset c on a unit-length domain integrates to c
    c = 0.7312
    g = Field(grid, u + c)
    assert error_1norm(g, f) == pytest.approx(c, rel=1e-14)
    rough = make_random_nonuniform(0.0, 1.0, 37, seed=1, ratio_max=3.0)
    fr = Field(rough, np.zeros((37, 1)))
    gr = Field(rough, np.full((37, 1), c))
    assert error_1norm(gr, fr) == pytest.approx(c, rel=1e-14)
    with pytest.raises(ValueError):
        error_1norm(f, fr)


def test_restriction_is_exact_averaging():
    f = lambda x: x ** 3 - 0.2 * x
    coarse = make_uniform(0.0, 1.0, 20)
    fine = make_uniform(0.0, 1.0, 80)
    cf = Field(coarse, cell_averages(coarse, f))
    ff = Field(fine, cell_averages(fine, f))
    assert error_1norm(cf, ff) <= 1e-15
    down = restrict_to(coarse, ff)
    assert down.grid is coarse
    with pytest.raises(ValueError):
        restrict_to(make_uniform(0.0, 1.0, 30), ff)
    with pytest.raises(ValueError):
        restrict_to(make_uniform(0.0, 2.0, 20), ff)


def test_cell_averages_with_breakpoint():
    grid = make_uniform(0.0, 1.0, 10)
    step = lambda x: np.where(x < 0.35, 2.0, 0.0)
    avg = cell_averages(grid, step, breakpoints=(0.35,))
    assert avg[3] == pytest.approx(1.0, rel=1e-14)  # cell [0.3, 0.4]
    assert avg[0] == 2.0 and avg[9] == 0.0
    # vector-valued profiles keep their trailing axis
    two = cell_averages(grid, lambda x: np.stack([x, x ** 2], axis=-1))
    assert two.shape == (10, 2)


def test_row_validation():
    with pytest.raises(ValueError):
        ConvergenceRow(N=0, error=1.0)
    with pytest.raises(ValueError):
        ConvergenceRow(N=10, error=-1.0)
    with pytest.raises(ValueError):
        ScanRow(d0=0.5, D=0.0, min_val=0.0, max_val=1.0)
    with pytest.raises(ValueError):
        ScanRow(d0=0.5, D=0.5, min_val=1.0, max_val=0.0)
    r = ScanRow(d0=0.5, D=1.0, min_val=0.0, max_val=1.0)
    assert r.D == 1.0


# ---------------------------------------------------------------- studies

def test_advect_low_third_order():
    rows = run_convergence("advect_low", 3, [40, 80, 160])
    assert math.isnan(rows[0].rate)
    assert abs(rows[-1].rate - 3.0) <= 0.35
    assert rows[-1].error < rows[0].error


def test_convergence_on_random_grid():
    rows = run_convergence("advect_low", 3, [40, 80, 160],
                           grid_kind="random:1.5", seed=4)
    assert abs(rows[-1].rate - 3.0) <= 0.35


def test_run_convergence_validates():
    with pytest.raises(ValueError):
        run_convergence("advect_mid", 3, [10, 20])
    with pytest.raises(ValueError):
        run_convergence("advect_low", 4, [10, 20])
    with pytest.raises(ValueError):
        run_convergence("advect_low", 3, [10, 20], grid_kind="chebyshev")


def test_swe_smooth_errors_fall():
    rows = run_convergence("swe_smooth", 5, [16, 32], n_reference=256)
    assert rows[1].error < rows[0].error


def test_disc_scan_stays_in_unit_interval():
    for order in (3, 5, 7):
        rows = run_disc_scan(order, [0.5, 0.75, 0.9])
        assert len(rows) == 3 * 99
        assert min(r.min_val for r in rows) >= -1e-12
        assert max(r.max_val for r in rows) <= 1.0 + 1e-12
    with pytest.raises(ValueError):
        run_disc_scan(9, [0.5])


def test_disc_scan_depends_weakly_on_d0():
    a = run_disc_scan(7, [0.5])
    b = run_disc_scan(7, [0.9])
    dev = max(max(abs(x.min_val - y.min_val), abs(x.max_val - y.max_val))
              for x, y in zip(a, b))
    assert dev < 0.1


def test_disc_scan_heaviside_boundary():
    rows = run_disc_scan(3, [0.75], d_grid=[1.0])
    assert rows[0].min_val >= -1e-12 and rows[0].max_val <= 1.0 + 1e-12


def test_property_r_order3_matches_closed_form():
    rows = run_property_r(3, [0.25, 0.5, 0.75, 1.0])
    for order, d0, h, ratio in rows:
        assert abs(ratio - cweno3_disc_ratio_closed_form(d0)) <= 1e-12


def test_property_r_ratio_bounded_below():
    for order in (3, 5, 7, 9):
        rows = run_property_r(order, [0.1, 0.5, 0.9])
        assert min(r[3] for r in rows) >= 0.01


def test_property_r_ratio_is_scale_free():
    rows = run_property_r(5, [0.5])
    vals = {r[3] for r in rows}
    assert len(vals) == 1


# ------------------------------------------------------------ named tests

def test_burgers_total_variation_bound():
    T = 1.0 / (2.0 * np.pi)
    snaps = run_named_test("burgers", tend=T)
    f0 = lambda x: 0.2 - np.sin(np.pi * x) + np.sin(2 * np.pi * x)
    xs = np.linspace(-1.0, 1.0, 200001)
    tv0 = float(np.abs(np.diff(f0(xs))).sum())
    assert total_variation(snaps[0][1].u) <= tv0 + 0.05


def test_burgers_snapshot_sequence():
    snaps = run_named_test("burgers", n=80)
    assert [t for t, _ in snaps] == pytest.approx([1 / (2 * np.pi), 0.6, 1.0])
    assert all(np.all(np.isfinite(f.u)) for _, f in snaps)
    assert snaps[-1][1].t == 1.0


def test_lax_density_peak_no_spurious_overshoot():
    coarse = run_named_test("lax", char_proj=True)[0][1]
    fine = run_named_test("lax", n=400, char_proj=True)[0][1]
    assert coarse.u[:, 0].max() <= 1.01 * fine.u[:, 0].max()


def test_dam_break_over_hump():
    f = run_named_test("dam_break", n=200)[0][1]
    h = f.u[:, 0]
    assert np.all(np.isfinite(f.u))
    assert h.min() > 0.1
    # the initial surface step allows a whisker of overshoot
    assert h.max() <= 1.51


def test_radial_sod_mirror_and_validation():
    f = run_named_test("radial_sod", n=200)[0][1]
    v = f.u
    assert np.abs(v[::-1, 0] - v[:, 0]).max() <= 1e-11
    with pytest.raises(ValueError):
        run_named_test("radial_sod", n=201)
    with pytest.raises(ValueError):
        run_named_test("sod_tube")


def test_lake_at_rest_driver():
    out, max_q = run_lake_at_rest(3, 100)
    assert max_q <= 1e-12
    # same seed reproduces the bottom, and the water started at rest
    again, max_q2 = run_lake_at_rest(3, 100)
    assert np.array_equal(out.u, again.u)


# ------------------------------------------------------------------- CSV

def test_csv_round_trip_is_bit_exact(tmp_path):
    path = str(tmp_path / "conv.csv")
    rows = [(40, 1.0 / 3.0, math.nan), (80, 2.0 ** -37.5, 3.0000000001)]
    meta = {"test": "advect_low", "order": 5, "N": "40,80", "d0": 0.75,
            "eps_power": 2, "seed": 0}
    write_csv(path, ["N", "error", "rate"], rows, meta)
    got_meta, cols, data = read_csv(path)
    assert cols == ["N", "error", "rate"]
    assert got_meta["test"] == "advect_low" and got_meta["order"] == "5"
    assert data[0, 0] == 40.0 and data[0, 1] == 1.0 / 3.0
    assert math.isnan(data[0, 2])
    assert data[1, 1] == 2.0 ** -37.5 and data[1, 2] == 3.0000000001


def test_csv_uses_lf_and_comment_header(tmp_path):
    path = str(tmp_path / "scan.csv")
    write_csv(path, ["d0", "D", "min", "max"],
              [(0.5, 0.01, 0.0, 1.0)], {"order": 3})
    raw = open(path, "rb").read()
    assert b"\r" not in raw
    assert raw.startswith(b"# order=3\nd0,D,min,max\n")


def test_solution_csv_round_trip(tmp_path):
    grid = make_uniform(-1.0, 1.0, 16)
    rng = np.random.default_rng(2)
    f = Field(grid, rng.standard_normal((16, 2)))
    path = str(tmp_path / "sol.csv")
    write_solution_csv(path, f, {"test": "demo", "N": 16})
    meta, cols, data = read_csv(path)
    assert cols == ["x", "comp0", "comp1"]
    assert np.array_equal(data[:, 0], grid.centers)
    assert np.array_equal(data[:, 1:], f.u)


def test_read_csv_rejects_headerless(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("# only=metadata\n")
    with pytest.raises(ValueError):
        read_csv(str(p))
