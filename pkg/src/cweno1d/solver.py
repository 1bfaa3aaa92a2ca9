"""Finite-volume semidiscretization with Local Lax-Friedrichs fluxes and
explicit Runge-Kutta time stepping.

One reconstruction per cell per stage serves interface values, in-cell source
quadrature, and the well-balanced shallow-water path alike.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .cweno import CwenoConfig, reconstruct_windows, window_gamma_tensors
from .grid import Grid1D, fill_ghost, ghost_centers, ghost_sizes
from .models import ModelSpec, swe_pressure

__all__ = [
    "BlowupError", "Field", "RunConfig", "ReconstructedField",
    "reconstruct_field", "llf_flux", "semidiscrete_rhs",
    "source_quadrature_gauss", "source_quadrature_richardson",
    "hydrostatic_wb_rhs", "butcher_step", "rk_advance", "cfl_dt",
    "run_to_time",
    "TABLEAUX", "parse_tableau_file", "RICHARDSON_RULES",
]


class BlowupError(RuntimeError):
    """The integration produced nonfinite values."""

    def __init__(self, stage: int, cell: int, t: float):
        self.stage = stage
        self.cell = cell
        self.t = t
        super().__init__(
            f"nonfinite state at t={t:.6g}, stage {stage}, cell {cell}")


TABLEAUX = {
    "ssprk3": (
        np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.25, 0.25, 0.0]]),
        np.array([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]),
        np.array([0.0, 1.0, 0.5]),
    ),
    "rk4": (
        np.array([[0.0, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0, 0.0],
                  [0.0, 0.5, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]),
        np.array([1.0, 2.0, 2.0, 1.0]) / 6.0,
        np.array([0.0, 0.5, 0.5, 1.0]),
    ),
}

# panel counts and combination coefficients of the extrapolated trapezoid
# rules, keyed by their order
RICHARDSON_RULES = {
    4: ((2, 1), (4.0 / 3.0, -1.0 / 3.0)),
    6: ((4, 2, 1), (64.0 / 45.0, -20.0 / 45.0, 1.0 / 45.0)),
    8: ((8, 4, 2, 1),
        (4096.0 / 2835.0, -1344.0 / 2835.0, 84.0 / 2835.0, -1.0 / 2835.0)),
    10: ((16, 8, 4, 2, 1),
         (1.450463049417298, -0.481599059376837, 0.031604938271605,
          -0.000470311581423, 0.000001383269357)),
}


def parse_tableau_file(path: str) -> tuple:
    """Explicit Butcher tableau from a plain-text file: the stage count,
    then the A rows, then b, then c, whitespace separated.  Lines starting
    with # are comments."""
    with open(path) as fh:
        tokens = []
        for line in fh:
            body = line.split("#", 1)[0]
            tokens.extend(body.split())
    if not tokens:
        raise ValueError("empty tableau file")
    s = int(tokens[0])
    need = 1 + s * s + 2 * s
    if len(tokens) != need:
        raise ValueError(f"expected {need} numbers for {s} stages,"
                         f" found {len(tokens)}")
    vals = np.array([float(x) for x in tokens[1:]])
    A = vals[: s * s].reshape(s, s)
    b = vals[s * s: s * s + s]
    c = vals[s * s + s:]
    if np.any(np.triu(A) != 0.0):
        raise ValueError("tableau must be explicit"
                         " (strictly lower triangular A)")
    return A, b, c


@dataclass(frozen=True)
class Field:
    """Cell averages on a grid at one instant."""

    grid: Grid1D
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=float)
        if u.ndim == 1:
            u = u[:, None]
        if u.ndim != 2 or u.shape[0] != self.grid.n_cells:
            raise ValueError("averages do not match the grid")
        object.__setattr__(self, "u", u)

    @property
    def m(self) -> int:
        return self.u.shape[1]


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs besides the initial field.

    quad is ("gauss", points) or ("richardson", order); unset it defaults to
    the Gauss rule matching the scheme's order.  The well-balanced path keeps
    its momentum source on the extrapolated-trapezoid nodes regardless, at
    the configured order when quad names one.  dt_law
    "cfl-with-order-matching" shrinks dt below the CFL value like
    h**((order-4)/4) relative to h_ref so time errors cannot pollute
    spatial convergence studies of orders above four.
    """

    model: ModelSpec
    cweno: CwenoConfig
    tend: float = 0.0
    cfl: float = 0.45
    integrator: str = None
    tableau: tuple = None
    dt_law: str = "cfl"
    h_ref: float = None
    char_proj: bool = False
    quad: tuple = None
    well_balanced: bool = False
    topography: np.ndarray = None
    desing_eps: float = None

    def __post_init__(self) -> None:
        if not 0.0 < self.cfl < 1.0:
            raise ValueError("cfl must lie in (0, 1)")
        if self.tend < 0.0:
            raise ValueError("tend must be nonnegative")
        if self.dt_law not in ("cfl", "cfl-with-order-matching"):
            raise ValueError(f"unknown dt law {self.dt_law!r}")
        if self.integrator is None:
            object.__setattr__(self, "integrator",
                               "ssprk3" if self.cweno.order == 3 else "rk4")
        if self.tableau is None and self.integrator not in TABLEAUX:
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.quad is None:
            object.__setattr__(self, "quad", ("gauss", self.cweno.g + 1))
        kind, par = self.quad
        if kind == "gauss":
            if not (isinstance(par, int) and par >= 1):
                raise ValueError("gauss quadrature needs a point count >= 1")
        elif kind == "richardson":
            if par not in RICHARDSON_RULES:
                raise ValueError("richardson order must be one of"
                                 f" {sorted(RICHARDSON_RULES)}")
        else:
            raise ValueError(f"unknown quadrature {kind!r}")
        if self.char_proj and self.model.eigensystem is None:
            raise ValueError("char_proj needs a model eigensystem")
        if self.well_balanced:
            if self.model.m != 2:
                raise ValueError("well-balanced path is for shallow water")
            if self.topography is None:
                raise ValueError("well-balanced path needs topography"
                                 " averages")
            z = np.asarray(self.topography, dtype=float)
            object.__setattr__(self, "topography", z)
        if self.desing_eps is not None and self.desing_eps <= 0.0:
            raise ValueError("desing_eps must be positive")


@dataclass(frozen=True)
class ReconstructedField:
    """Per-cell reconstruction polynomials in each cell's scaled variable.

    coeffs is (ncells, m, 2g+1) covering n_ghost ghost cells per side;
    offsets passed to values_at/derivatives_at are measured in cell widths
    from each center, so -1/2 and +1/2 are the cell boundaries.
    """

    coeffs: np.ndarray
    centers: np.ndarray
    sizes: np.ndarray
    n_ghost: int

    def values_at(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        powers = xi[..., None] ** np.arange(self.coeffs.shape[-1])
        if xi.ndim == 0:
            return np.einsum("cmk,k->cm", self.coeffs, powers)
        return np.einsum("cmk,qk->cmq", self.coeffs, powers)

    def derivatives_at(self, xi) -> np.ndarray:
        n = self.coeffs.shape[-1]
        dc = self.coeffs[..., 1:] * np.arange(1, n)
        xi = np.asarray(xi, dtype=float)
        powers = xi[..., None] ** np.arange(n - 1)
        if xi.ndim == 0:
            return np.einsum("cmk,k->cm", dc, powers) / self.sizes[:, None]
        return (np.einsum("cmk,qk->cmq", dc, powers)
                / self.sizes[:, None, None])

    def node_positions(self, xi) -> np.ndarray:
        return self.centers[:, None] + self.sizes[:, None] * np.asarray(xi)

    def interior(self) -> "ReconstructedField":
        if self.n_ghost == 0:
            return self
        s = slice(self.n_ghost, -self.n_ghost)
        return ReconstructedField(self.coeffs[s], self.centers[s],
                                  self.sizes[s], 0)


_GAMMA_CACHE = {}


def _grid_gammas(grid: Grid1D, g: int):
    # one entry per (grid, order) pair for the life of the process
    key = (grid.cache_key(), g)
    if key not in _GAMMA_CACHE:
        s_ext = ghost_sizes(grid, g + 1)
        s_win = np.ascontiguousarray(
            sliding_window_view(s_ext, 2 * g + 1, axis=0))
        _GAMMA_CACHE[key] = (window_gamma_tensors(s_win, g), s_win)
    return _GAMMA_CACHE[key]


def reconstruct_field(grid: Grid1D, u: np.ndarray, ccfg: CwenoConfig,
                      char_proj: bool = False,
                      model: ModelSpec = None) -> ReconstructedField:
    """Reconstruct all cells plus one ghost cell per side.

    With char_proj the stencil data are mapped to characteristic variables of
    the window's central state before reconstruction and back after.
    """
    g = ccfg.g
    n = 2 * g + 1
    width = g + 1
    if u.ndim == 1:
        u = u[:, None]
    mask = model.odd_mask if model is not None else None
    u_ext = fill_ghost(grid, u, width, odd_mask=mask)
    win = sliding_window_view(u_ext, n, axis=0)
    if char_proj:
        lam, L, R = model.eigensystem(np.ascontiguousarray(win[:, :, g]))
        win = np.einsum("cij,cjk->cik", L, win)
    if grid.uniform:
        coeffs, _, _ = reconstruct_windows(win, ccfg, h=float(grid.sizes[0]))
    else:
        gammas, s_win = _grid_gammas(grid, g)
        coeffs, _, _ = reconstruct_windows(win, ccfg, sizes=s_win,
                                           gammas=gammas)
    if char_proj:
        coeffs = np.einsum("cij,cjk->cik", R, coeffs)
    return ReconstructedField(coeffs, ghost_centers(grid, 1),
                              ghost_sizes(grid, 1), 1)


def llf_flux(uL: np.ndarray, uR: np.ndarray, model: ModelSpec) -> np.ndarray:
    a = np.maximum(model.max_wave_speed(uL), model.max_wave_speed(uR))
    return 0.5 * (model.flux(uL) + model.flux(uR)) \
        - 0.5 * a[..., None] * (uR - uL)


def _interface_states(rec: ReconstructedField):
    return rec.values_at(0.5)[:-1], rec.values_at(-0.5)[1:]


def _gauss_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * x, 0.5 * w


def source_quadrature_gauss(rec: ReconstructedField, model: ModelSpec,
                            n: int) -> np.ndarray:
    """Cell averages of the source, n-point Gauss-Legendre."""
    xi, wt = _gauss_rule(n)
    states = np.moveaxis(rec.values_at(xi), 1, 2)
    s = model.source(states, rec.node_positions(xi))
    return np.einsum("q,cqm->cm", wt, s)


def _richardson_nodes(order: int) -> np.ndarray:
    nmax = RICHARDSON_RULES[order][0][0]
    return -0.5 + np.arange(nmax + 1) / nmax


def _richardson_combine(values: np.ndarray, order: int) -> np.ndarray:
    """Average over the cell from values at the nested trapezoid nodes
    (trailing axis), combined exactly as the rule prescribes."""
    panels, coefs = RICHARDSON_RULES[order]
    nmax = panels[0]
    total = 0.0
    for npan, cf in zip(panels, coefs):
        sub = values[..., :: nmax // npan]
        s = (0.5 * sub[..., 0] + sub[..., 1:-1].sum(axis=-1)
             + 0.5 * sub[..., -1]) / npan
        total = total + cf * s
    return total


def source_quadrature_richardson(rec: ReconstructedField, model: ModelSpec,
                                 order: int) -> np.ndarray:
    """Cell averages of the source on the extrapolated trapezoid rule.

    The node set includes the cell boundaries, so models with point
    singularities refuse grids whose edges touch them.
    """
    xi = _richardson_nodes(order)
    states = np.moveaxis(rec.values_at(xi), 1, 2)
    s = model.source(states, rec.node_positions(xi))
    return _richardson_combine(np.moveaxis(s, 1, 2), order)


def semidiscrete_rhs(field: Field, cfg: RunConfig,
                     z_rec: ReconstructedField = None) -> np.ndarray:
    """Right-hand side of the method-of-lines system, (N, m)."""
    if cfg.well_balanced:
        return hydrostatic_wb_rhs(field, cfg, z_rec)
    grid = field.grid
    rec = reconstruct_field(grid, field.u, cfg.cweno,
                            char_proj=cfg.char_proj, model=cfg.model)
    uL, uR = _interface_states(rec)
    if grid.bc == "periodic":
        F = llf_flux(uL[:-1], uR[:-1], cfg.model)
        F = np.concatenate([F, F[:1]], axis=0)
    else:
        F = llf_flux(uL, uR, cfg.model)
    rhs = -(F[1:] - F[:-1]) / grid.sizes[:, None]
    if cfg.model.source is not None:
        kind, par = cfg.quad
        inner = rec.interior()
        if kind == "gauss":
            rhs = rhs + source_quadrature_gauss(inner, cfg.model, par)
        else:
            rhs = rhs + source_quadrature_richardson(inner, cfg.model, par)
    return rhs


def _desing_velocity(h, q, eps):
    h2 = h * h
    return 2.0 * h * q / (h2 + np.maximum(h2, eps * eps))


def hydrostatic_wb_rhs(field: Field, cfg: RunConfig,
                       z_rec: ReconstructedField = None) -> np.ndarray:
    """Shallow-water right-hand side that keeps lakes at rest exactly.

    Reconstructs the free surface w = h + z and the discharge, moves the
    interface states onto the higher of the two bottom values, and balances
    the pressure parts of the flux against in-cell quadrature of the
    momentum source.  All pressure evaluations share swe_pressure so the
    at-rest cancellations happen bitwise.
    """
    grid = field.grid
    model = cfg.model
    g_const = model.constants["g_const"]
    zbar = cfg.topography
    if z_rec is None:
        z_rec = reconstruct_field(grid, zbar[:, None], cfg.cweno)
    w = field.u.copy()
    w[:, 0] += zbar
    rec = reconstruct_field(grid, w, cfg.cweno, model=model)

    wqL, wqR = _interface_states(rec)
    zL = z_rec.values_at(0.5)[:-1, 0]
    zR = z_rec.values_at(-0.5)[1:, 0]
    sz = ghost_sizes(grid, 1)
    eps_l = sz[:-1] if cfg.desing_eps is None else cfg.desing_eps
    eps_r = sz[1:] if cfg.desing_eps is None else cfg.desing_eps
    vl = _desing_velocity(wqL[:, 0] - zL, wqL[:, 1], eps_l)
    vr = _desing_velocity(wqR[:, 0] - zR, wqR[:, 1], eps_r)

    z_star = np.maximum(zL, zR)
    hsl = np.maximum(0.0, wqL[:, 0] - z_star)
    hsr = np.maximum(0.0, wqR[:, 0] - z_star)
    qsl = hsl * vl
    qsr = hsr * vr
    a = np.maximum(np.abs(vl) + np.sqrt(g_const * hsl),
                   np.abs(vr) + np.sqrt(g_const * hsr))
    F_h = 0.5 * (qsl + qsr) - 0.5 * a * (hsr - hsl)
    F_q = 0.5 * (qsl * vl + swe_pressure(hsl, g_const)
                 + qsr * vr + swe_pressure(hsr, g_const)) \
        - 0.5 * a * (qsr - qsl)
    if grid.bc == "periodic":
        # periodic ghost windows are bitwise copies, so this only makes the
        # conservation statement explicit
        F_h[-1] = F_h[0]
        F_q[-1] = F_q[0]
    corr = swe_pressure(hsl[1:], g_const) - swe_pressure(hsr[:-1], g_const)

    order = cfg.quad[1] if cfg.quad[0] == "richardson" else 2 * cfg.cweno.g + 2
    xi = _richardson_nodes(order)
    inner = rec.interior()
    w_vals = inner.values_at(xi)
    w_x = inner.derivatives_at(xi)[:, 0, :]
    h_vals = w_vals[:, 0, :] - z_rec.interior().values_at(xi)[:, 0, :]
    src_q = _richardson_combine(g_const * h_vals * w_x, order)

    h_j = grid.sizes
    rhs = np.empty_like(field.u)
    rhs[:, 0] = -(F_h[1:] - F_h[:-1]) / h_j
    rhs[:, 1] = (corr - (F_q[1:] - F_q[:-1])) / h_j - src_q
    return rhs


def _check_finite(u: np.ndarray, stage: int, t: float) -> None:
    if not np.all(np.isfinite(u)):
        cell = int(np.argwhere(~np.isfinite(u))[0][0])
        raise BlowupError(stage, cell, t)


def butcher_step(u: np.ndarray, t: float, dt: float, rhs_fn,
                 tableau) -> np.ndarray:
    """One explicit Runge-Kutta step of du/dt = rhs_fn(u, t)."""
    A, b, c = tableau
    ks = []
    for i in range(len(b)):
        ui = u
        for j in range(i):
            if A[i][j] != 0.0:
                ui = ui + (dt * A[i][j]) * ks[j]
        _check_finite(ui, i, t)
        ks.append(rhs_fn(ui, t + c[i] * dt))
    out = u.copy()
    for i, bi in enumerate(b):
        if bi != 0.0:
            out += (dt * bi) * ks[i]
    _check_finite(out, len(b), t)
    return out


def rk_advance(field: Field, cfg: RunConfig, dt: float,
               z_rec: ReconstructedField = None) -> Field:
    tableau = cfg.tableau if cfg.tableau is not None \
        else TABLEAUX[cfg.integrator]

    def rhs_fn(u, t):
        return semidiscrete_rhs(Field(field.grid, u, t), cfg, z_rec)

    u_new = butcher_step(field.u, field.t, dt, rhs_fn, tableau)
    return Field(field.grid, u_new, field.t + dt)


def cfl_dt(field: Field, cfg: RunConfig) -> float:
    """CFL-limited step.  Under "cfl-with-order-matching" schemes above
    order four get the extra shrink h**((order-4)/4) relative to h_ref, so a
    fourth-order integrator cannot cap a convergence study."""
    h_min = float(field.grid.sizes.min())
    amax = float(cfg.model.max_wave_speed(field.u).max())
    if amax <= 0.0:
        return np.inf
    dt = cfg.cfl * h_min / amax
    if cfg.dt_law == "cfl-with-order-matching" and cfg.cweno.order > 4:
        h_ref = h_min if cfg.h_ref is None else cfg.h_ref
        dt *= min(1.0, (h_min / h_ref) ** ((cfg.cweno.order - 4) / 4.0))
    return dt


def run_to_time(field: Field, cfg: RunConfig) -> Field:
    """Advance to cfg.tend with CFL-limited steps (the last one clipped)."""
    z_rec = None
    if cfg.well_balanced:
        z_rec = reconstruct_field(field.grid, cfg.topography[:, None],
                                  cfg.cweno)
    grid = field.grid
    u, t = field.u, field.t
    while t < cfg.tend:
        remaining = cfg.tend - t
        dt = cfl_dt(Field(grid, u, t), cfg)
        if dt >= remaining:
            dt, t_next = remaining, cfg.tend
        else:
            t_next = t + dt
        u = butcher_step(
            u, t, dt,
            lambda uu, tt: semidiscrete_rhs(Field(grid, uu, tt), cfg, z_rec),
            cfg.tableau if cfg.tableau is not None
            else TABLEAUX[cfg.integrator])
        t = t_next
    return Field(grid, u, t)
