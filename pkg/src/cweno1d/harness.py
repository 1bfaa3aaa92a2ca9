"""Experiment drivers: error norms, convergence and scan studies, named
benchmark runs, and their CSV artifacts.

Every driver is deterministic given its arguments, so repeated invocations
produce byte-identical CSV files.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cweno import (CwenoConfig, cweno3_disc_ratio,
                    cweno3_disc_ratio_closed_form, cweno_reconstruct)
from .grid import Grid1D, make_random_nonuniform, make_uniform
from .models import (advection, burgers, euler, euler_conserved,
                     euler_radial, shallow_water)
from .smoothness import jiang_shu
from .solver import Field, RunConfig, run_to_time

__all__ = [
    "ConvergenceRow", "ScanRow", "cell_averages", "restrict_to",
    "error_1norm", "total_variation", "convergence_rates",
    "run_convergence", "run_disc_scan", "run_property_r", "run_named_test",
    "run_lake_at_rest", "format_csv", "write_csv", "read_csv",
    "write_solution_csv",
    "CONVERGENCE_TESTS", "NAMED_TESTS", "ORDER_TO_G", "DEFAULT_H_LADDER",
]

ORDER_TO_G = {3: 1, 5: 2, 7: 3, 9: 4}

DEFAULT_H_LADDER = tuple(2.0 ** -k for k in range(3, 11))


@dataclass(frozen=True)
class ConvergenceRow:
    """One resolution of a refinement study.  rate is NaN on the first row
    (there is no coarser error to compare against)."""

    N: int
    error: float
    rate: float = math.nan

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.error < 0.0:
            raise ValueError("error must be nonnegative")


@dataclass(frozen=True)
class ScanRow:
    d0: float
    D: float
    min_val: float
    max_val: float

    def __post_init__(self) -> None:
        if not 0.0 < self.D <= 1.0:
            raise ValueError("D must lie in (0, 1]")
        if self.min_val > self.max_val:
            raise ValueError("min exceeds max")


def cell_averages(grid: Grid1D, f, breakpoints=()) -> np.ndarray:
    """Exact cell averages of f by 10-point Gauss quadrature.

    Cells containing a breakpoint are split there first, so piecewise-smooth
    data (Riemann initial states) is averaged exactly too.  f maps an array
    of positions to values, optionally with a trailing component axis.
    """
    xg, wg = np.polynomial.legendre.leggauss(10)
    pieces = []
    for lo, hi in zip(grid.edges[:-1], grid.edges[1:]):
        cuts = [lo] + [b for b in sorted(breakpoints) if lo < b < hi] + [hi]
        acc = None
        for a, b in zip(cuts[:-1], cuts[1:]):
            xs = 0.5 * (a + b) + 0.5 * (b - a) * xg
            vals = np.asarray(f(xs), dtype=float)
            part = (b - a) / 2.0 * np.tensordot(wg, vals, axes=(0, 0))
            acc = part if acc is None else acc + part
        pieces.append(acc / (hi - lo))
    return np.array(pieces)


def restrict_to(grid: Grid1D, fine: Field) -> Field:
    """Exact averaging of a finer solution onto an aligned coarse grid."""
    n, n_fine = grid.n_cells, fine.grid.n_cells
    if n_fine % n != 0:
        raise ValueError("fine grid is not a refinement of the coarse one")
    k = n_fine // n
    if not np.array_equal(grid.edges, fine.grid.edges[::k]):
        raise ValueError("grids do not share coarse cell edges")
    mass = fine.u * fine.grid.sizes[:, None]
    coarse = mass.reshape(n, k, fine.m).sum(axis=1) / grid.sizes[:, None]
    return Field(grid, coarse, fine.t)


def error_1norm(field: Field, reference: Field) -> float:
    """Sum over components of sum_j h_j |ubar_j - ubar_ref,j|."""
    ref = reference
    if ref.grid.n_cells != field.grid.n_cells:
        ref = restrict_to(field.grid, ref)
    elif not np.array_equal(ref.grid.edges, field.grid.edges):
        raise ValueError("fields live on different grids")
    diff = np.abs(field.u - ref.u)
    return float((field.grid.sizes[:, None] * diff).sum())


def total_variation(u: np.ndarray) -> float:
    return float(np.abs(np.diff(u, axis=0)).sum())


def convergence_rates(n_values, errors) -> list:
    """Observed orders log(e_prev/e)/log(N/N_prev); NaN leads the list."""
    rates = [math.nan]
    for i in range(1, len(errors)):
        rates.append(math.log(errors[i - 1] / errors[i])
                     / math.log(n_values[i] / n_values[i - 1]))
    return rates


# --------------------------------------------------------------- studies

def _advect_low(x):
    return np.sin(np.pi * x - np.sin(np.pi * x) / np.pi)


def _advect_high(x):
    return np.sin(np.pi * x) + 0.25 * np.sin(15 * np.pi * x) \
        * np.exp(-20.0 * x * x)


def _swe_smooth_state(x):
    h = 5.0 + np.exp(np.cos(2 * np.pi * x))
    q = np.sin(np.cos(2 * np.pi * x))
    return np.stack([h, q], axis=-1)


def _swe_smooth_model():
    # dimensionless gravity; with g=9.81 the flow roughens enough by t=0.1
    # that fifth-order error constants grow three orders of magnitude
    return shallow_water(
        g_const=1.0,
        z=lambda x: np.sin(np.pi * x) ** 2,
        dz=lambda x: np.pi * np.sin(2 * np.pi * x))


# profile, domain, final time, model factory; analytic tests advect the
# profile, the rest self-refine
CONVERGENCE_TESTS = {
    "advect_low": (_advect_low, (-1.0, 1.0), 2.0, advection),
    "advect_high": (_advect_high, (-1.0, 1.0), 2.0, advection),
    "swe_smooth": (_swe_smooth_state, (0.0, 1.0), 0.1, _swe_smooth_model),
}

_REFERENCE_CACHE = {}


def _self_reference(test: str, n_ref: int, cfl: float) -> Field:
    key = (test, n_ref, cfl)
    if key not in _REFERENCE_CACHE:
        f0, (a, b), tend, make_model = CONVERGENCE_TESTS[test]
        grid = make_uniform(a, b, n_ref, bc="periodic")
        u0 = cell_averages(grid, f0)
        cfg = RunConfig(model=make_model(), cweno=CwenoConfig(g=2),
                        tend=tend, cfl=cfl)
        _REFERENCE_CACHE[key] = run_to_time(Field(grid, u0), cfg)
    return _REFERENCE_CACHE[key]


def _study_grid(a, b, n, grid_kind, seed):
    if grid_kind == "uniform":
        return make_uniform(a, b, n, bc="periodic")
    if grid_kind.startswith("random:"):
        ratio = float(grid_kind.split(":", 1)[1])
        return make_random_nonuniform(a, b, n, seed=seed, ratio_max=ratio)
    raise ValueError(f"unknown grid kind {grid_kind!r}")


def run_convergence(test: str, order: int, n_list, *, d0: float = 0.75,
                    eps_hat: float = 1.0, eps_power: int = 2,
                    t_exp: int = 2, cfl: float = 0.45,
                    char_proj: bool = False, grid_kind: str = "uniform",
                    seed: int = 0, quad=None,
                    n_reference: int = 4096) -> list:
    """Refinement study on one of the smooth tests.

    The advection tests are scored against exact averages of the shifted
    profile; the shallow-water test scores the height against a fine
    self-computed reference restricted onto each study grid.  Time steps
    follow the
    order-matching law anchored at the coarsest resolution.
    """
    if test not in CONVERGENCE_TESTS:
        raise ValueError(f"unknown convergence test {test!r}")
    if order not in ORDER_TO_G:
        raise ValueError("order must be one of 3, 5, 7, 9")
    f0, (a, b), tend, make_model = CONVERGENCE_TESTS[test]
    model = make_model()
    ccfg = CwenoConfig(g=ORDER_TO_G[order], d0=d0, eps_hat=eps_hat,
                       eps_power=eps_power, t_exp=t_exp)
    n_list = sorted(int(n) for n in n_list)
    h_coarse = (b - a) / n_list[0]
    reference = None
    if test == "swe_smooth":
        reference = _self_reference(test, n_reference, cfl)
    rows = []
    for n in n_list:
        grid = _study_grid(a, b, n, grid_kind, seed)
        u0 = cell_averages(grid, f0)
        cfg = RunConfig(model=model, cweno=ccfg, tend=tend, cfl=cfl,
                        char_proj=char_proj, quad=quad,
                        dt_law="cfl-with-order-matching", h_ref=h_coarse)
        out = run_to_time(Field(grid, u0), cfg)
        if reference is None:
            # unit speed: the profile returns shifted by tend
            length = b - a
            shift = tend % length
            ref_f = lambda x: f0(a + (x - a - shift) % length)
            ref = Field(grid, cell_averages(grid, ref_f), tend)
            rows.append(error_1norm(out, ref))
        else:
            # the shallow-water study is scored on the height component
            ref = restrict_to(grid, reference)
            diff = np.abs(out.u[:, 0] - ref.u[:, 0])
            rows.append(float((grid.sizes * diff).sum()))
    rates = convergence_rates(n_list, rows)
    return [ConvergenceRow(N=n, error=e, rate=r)
            for n, e, r in zip(n_list, rows, rates)]


def _poly_range_on_cell(p, lo: float, hi: float) -> tuple:
    """Exact min and max of the reconstruction over one cell: dense samples
    guard the scan, derivative roots make it exact."""
    xs = np.linspace(lo, hi, 201)
    vals = p.eval(xs)
    candidates = [vals.min(), vals.max()]
    dcoef = np.polynomial.polynomial.polyder(p.coeffs)
    roots = np.polynomial.polynomial.polyroots(dcoef)
    for r in roots:
        if abs(r.imag) < 1e-12:
            x = p.center + p.scale * r.real
            if lo <= x <= hi:
                v = float(p.eval(x))
                candidates += [v, v]
    return min(candidates), max(candidates)


def run_disc_scan(order: int, d0_list, d_grid=None) -> list:
    """Range of the reconstruction on the step-with-intermediate-value data
    (..., 1, 1, D, 0, 0, ...) over the central cell, per (d0, D).

    The scan is scale free: eps is kept far below every nonzero indicator
    (it only breaks the tie at the D = 1 boundary, where one sub-stencil is
    exactly flat and in the limit must win outright).
    """
    if order not in (3, 5, 7):
        raise ValueError("disc scan covers orders 3, 5, 7")
    g = ORDER_TO_G[order]
    if d_grid is None:
        d_grid = np.round(np.linspace(0.01, 0.99, 99), 2)
    rows = []
    for d0 in d0_list:
        cfg = CwenoConfig(g=g, d0=d0)
        for dval in d_grid:
            avgs = np.concatenate([np.ones(g), [dval], np.zeros(g)])
            res = cweno_reconstruct(avgs, 1.0, cfg, eps=1e-150)
            lo, hi = _poly_range_on_cell(res.p_rec, -0.5, 0.5)
            rows.append(ScanRow(d0=float(d0), D=float(dval),
                                min_val=lo, max_val=hi))
    return rows


def _heaviside_ratio(g: int, d0: float, h: float) -> float:
    """Smallest I[P_0]/I[P_opt] over all jump placements in the stencil."""
    cfg = CwenoConfig(g=g, d0=d0)
    n = 2 * g + 1
    worst = math.inf
    for jump in range(1, n):
        avgs = np.where(np.arange(n) < jump, 1.0, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            res = cweno_reconstruct(avgs, h, cfg, eps=0.0)
        ratio = res.indicators[0] / jiang_shu(res.p_opt, (-h / 2, h / 2))
        worst = min(worst, float(ratio))
    return worst


def run_property_r(order: int, d0_list, h_list=DEFAULT_H_LADDER) -> list:
    """Decay-proof ratio I[P_0]/I[P_opt] on jump data, rows of
    (order, d0, h, ratio).

    The third-order case follows the two-sided convention whose closed form
    is (3 d0^2 - 6 d0 + 16)/(16 d0^2), evaluated through the reconstruction
    machinery; higher orders take the worst jump placement.
    """
    if order not in ORDER_TO_G:
        raise ValueError("order must be one of 3, 5, 7, 9")
    g = ORDER_TO_G[order]
    rows = []
    for d0 in d0_list:
        for h in h_list:
            if order == 3:
                ratio = min(cweno3_disc_ratio(d0, (1.0, 0.0, 0.0)),
                            cweno3_disc_ratio(d0, (0.0, 0.0, 1.0)))
            else:
                ratio = _heaviside_ratio(g, d0, h)
            rows.append((order, float(d0), float(h), ratio))
    return rows


# ------------------------------------------------------------ named tests

def _lake_topography(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).uniform(0.0, 1.0, n)


def run_lake_at_rest(order: int, n: int, *, tend: float = 0.1,
                     seed: int = 0, surface: float = 1.5,
                     cfl: float = 0.45) -> tuple:
    """Rough-bottom lake at rest; returns (field, max |q| at tend)."""
    if order not in ORDER_TO_G:
        raise ValueError("order must be one of 3, 5, 7, 9")
    grid = make_uniform(0.0, 1.0, n, bc="periodic")
    zbar = _lake_topography(n, seed)
    u0 = np.stack([surface - zbar, np.zeros(n)], axis=1)
    cfg = RunConfig(model=shallow_water(), cweno=CwenoConfig(g=ORDER_TO_G[order]),
                    tend=tend, cfl=cfl, well_balanced=True, topography=zbar)
    out = run_to_time(Field(grid, u0), cfg)
    return out, float(np.abs(out.u[:, 1]).max())


def _burgers_setup(n, seed):
    grid = make_uniform(-1.0, 1.0, n, bc="periodic")
    u0 = cell_averages(grid, lambda x: 0.2 - np.sin(np.pi * x)
                       + np.sin(2 * np.pi * x))
    return grid, u0, burgers(), None, ()


def _lax_setup(n, seed):
    grid = make_uniform(-5.0, 5.0, n, bc="outflow")

    def f0(x):
        left = x < 0.0
        rho = np.where(left, 0.445, 0.5)
        v = np.where(left, 0.6989, 0.0)
        p = np.where(left, 3.5277, 0.571)
        return euler_conserved(rho, v, p)

    return grid, cell_averages(grid, f0, breakpoints=(0.0,)), euler(), \
        None, (0.0,)


def _dam_break_setup(n, seed):
    grid = make_uniform(-2.0, 2.0, n, bc="outflow")
    z = lambda x: 0.3 * np.exp(-10.0 * x * x)
    zbar = cell_averages(grid, z)

    def f0(x):
        w = np.where(x < 0.0, 1.5, 0.5)
        return np.stack([w - z(x), np.zeros_like(x)], axis=-1)

    return grid, cell_averages(grid, f0, breakpoints=(0.0,)), \
        shallow_water(), zbar, (0.0,)


def _swe_rough_setup(n, seed):
    grid = make_uniform(0.0, 1.0, n, bc="periodic")
    zbar = _lake_topography(n, seed)
    u0 = np.stack([1.5 - zbar, np.zeros(n)], axis=1)
    return grid, u0, shallow_water(), zbar, ()


def _radial_sod_setup(n, seed):
    if n % 2:
        raise ValueError("radial test needs an even cell count")
    grid = make_uniform(-1.0, 1.0, n, bc="outflow")

    def f0(x):
        inner = np.abs(x) < 0.5
        rho = np.where(inner, 1.0, 0.125)
        p = np.where(inner, 1.0, 0.1)
        return euler_conserved(rho, np.zeros_like(x), p)

    return grid, cell_averages(grid, f0, breakpoints=(-0.5, 0.5)), \
        euler_radial(3), None, (-0.5, 0.5)


# setup, default N, snapshot times, well-balanced flag
NAMED_TESTS = {
    "burgers": (_burgers_setup, 160,
                (1.0 / (2.0 * np.pi), 0.6, 1.0), False),
    "lax": (_lax_setup, 200, (1.3,), False),
    "dam_break": (_dam_break_setup, 400, (0.2,), True),
    "swe_rough": (_swe_rough_setup, 400, (0.1,), True),
    "radial_sod": (_radial_sod_setup, 400, (0.25,), False),
}


def run_named_test(test: str, *, order: int = 5, n: int = None,
                   tend=None, d0: float = 0.75, eps_hat: float = 1.0,
                   eps_power: int = 2, t_exp: int = 2, cfl: float = 0.45,
                   char_proj: bool = False, quad=None, seed: int = 0,
                   wb=None, tableau=None, model=None) -> list:
    """Run one benchmark problem, returning [(t, Field), ...] snapshots.

    tend may be a number or a sequence of snapshot times; the run carries
    on between snapshots instead of restarting.
    """
    if test not in NAMED_TESTS:
        raise ValueError(f"unknown test {test!r}")
    setup, n_default, times, wb_default = NAMED_TESTS[test]
    n = n_default if n is None else int(n)
    grid, u0, default_model, zbar, _ = setup(n, seed)
    if model is not None:
        default_model = model
    if tend is None:
        tend = times
    try:
        times = tuple(float(t) for t in tend)
    except TypeError:
        times = (float(tend),)
    use_wb = wb_default if wb is None else bool(wb)
    if use_wb and zbar is None:
        raise ValueError(f"test {test!r} has no topography")
    ccfg = CwenoConfig(g=ORDER_TO_G[order], d0=d0, eps_hat=eps_hat,
                       eps_power=eps_power, t_exp=t_exp)
    field = Field(grid, u0)
    snaps = []
    for t in times:
        cfg = RunConfig(model=default_model, cweno=ccfg, tend=t, cfl=cfl,
                        char_proj=char_proj, quad=quad, tableau=tableau,
                        well_balanced=use_wb,
                        topography=zbar if use_wb else None)
        field = run_to_time(field, cfg)
        snaps.append((t, field))
    return snaps


# ------------------------------------------------------------------- CSV

def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def format_csv(columns, rows, metadata: dict) -> str:
    """Header row plus one `# key=value ...` metadata comment, 17
    significant digits, LF endings."""
    lines = ["# " + " ".join(f"{k}={v}" for k, v in metadata.items())]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str, columns, rows, metadata: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_csv(columns, rows, metadata))


def write_solution_csv(path: str, field: Field, metadata: dict) -> None:
    columns = ["x"] + [f"comp{i}" for i in range(field.m)]
    rows = np.column_stack([field.grid.centers, field.u])
    write_csv(path, columns, rows, metadata)


def read_csv(path: str) -> tuple:
    """Inverse of write_csv: (metadata dict, column list, value array)."""
    metadata = {}
    columns = None
    data = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                for pair in line[1:].split():
                    if "=" in pair:
                        k, v = pair.split("=", 1)
                        metadata[k] = v
                continue
            if columns is None:
                columns = line.split(",")
                continue
            data.append([float(x) for x in line.split(",")])
    if columns is None:
        raise ValueError(f"{path}: no header row")
    return metadata, columns, np.array(data)
