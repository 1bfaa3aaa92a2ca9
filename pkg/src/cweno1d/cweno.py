"""Central WENO reconstruction on 2g+1 cell stencils, orders 3 to 9.

The operator blends one optimal polynomial of degree 2g with g+1 low-degree
candidates of degree g (one per left-offset r = g..0) and the central
polynomial obtained by subtracting the weighted candidates from the optimal
one.  Weights follow the classical inverse-power law on Jiang-Shu indicators.

A boundary-point WENO operator on uniform grids is included for comparison
runs; its optimal edge weights are solved for exactly instead of tabulated.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .poly import (Poly, build_diff_table, gamma_matrix_nonuniform,
                   gamma_matrix_uniform, gamma_uniform, interpolant)
from .smoothness import jiang_shu, unit_quadratic_form

__all__ = [
    "CwenoConfig", "CwenoResult", "linear_coefficients",
    "weights_from_indicators", "cweno_reconstruct", "window_gamma_tensors",
    "reconstruct_windows", "weno_optimal_weights", "weno_reconstruct_point",
    "cweno3_disc_ratio", "cweno3_disc_ratio_closed_form",
]

_VALID_G = (1, 2, 3, 4)


def linear_coefficients(g: int, d0: float) -> list:
    """Symmetric center-biased linear coefficients (d_0, d_1, ..., d_{g+1}).

    The profile behind d_0 rises linearly toward the middle candidates and
    falls off symmetrically, normalized so the full vector sums to one.
    """
    if g not in _VALID_G:
        raise ValueError(f"unsupported half-degree {g}")
    if not 0.0 < d0 < 1.0:
        raise ValueError("d0 must lie strictly between 0 and 1")
    mh = g + 1
    tilde = [min(j, mh + 1 - j) for j in range(1, mh + 1)]
    total = sum(tilde)
    return [d0] + [(1.0 - d0) * tj / total for tj in tilde]


@dataclass(frozen=True)
class CwenoConfig:
    """Parameters of the reconstruction.

    order = 2g+1.  eps(h) = eps_hat * h**eps_power regularizes the indicator
    denominators; t_exp is the inverse-power exponent.  An explicit coefficient
    vector d of length g+2 overrides the default profile; d[0] is the weight
    of the central polynomial.  force_linear_weights bypasses the indicators
    entirely, turning the operator into its linear high-order limit.
    """

    g: int
    d0: float = 0.75
    eps_hat: float = 1.0
    eps_power: int = 2
    t_exp: int = 2
    d: tuple = None
    force_linear_weights: bool = False

    def __post_init__(self) -> None:
        if self.g not in _VALID_G:
            raise ValueError(f"unsupported half-degree {self.g}")
        if self.eps_hat <= 0.0:
            raise ValueError("eps_hat must be positive")
        if self.eps_power not in (0, 1, 2):
            raise ValueError("eps_power must be 0, 1 or 2")
        if not isinstance(self.t_exp, int) or self.t_exp < 2:
            raise ValueError("t_exp must be an integer >= 2")
        if self.d is None:
            object.__setattr__(self, "d",
                               tuple(linear_coefficients(self.g, self.d0)))
        else:
            d = tuple(float(x) for x in self.d)
            if len(d) != self.g + 2:
                raise ValueError("coefficient vector must have g+2 entries")
            if any(not 0.0 < x <= 1.0 for x in d):
                raise ValueError("coefficients must lie in (0, 1]")
            if abs(sum(d) - 1.0) > 1e-12:
                raise ValueError("coefficients must sum to one")
            object.__setattr__(self, "d", d)
            object.__setattr__(self, "d0", d[0])

    @property
    def order(self) -> int:
        return 2 * self.g + 1

    def eps(self, h):
        return self.eps_hat * h**self.eps_power


@dataclass(frozen=True)
class CwenoResult:
    """Everything the reconstruction of one cell produces.

    candidates[0] is the central polynomial (degree 2g); candidates[1:] are
    the degree-g polynomials ordered from the leftmost stencil to the
    rightmost.  omegas and indicators align with candidates.
    """

    p_rec: Poly
    p_opt: Poly
    candidates: tuple
    omegas: np.ndarray
    indicators: np.ndarray


def weights_from_indicators(d, indicators, eps, t_exp):
    """Normalized inverse-power weights d_k / (I_k + eps)**t_exp.

    Broadcasts over leading axes of ``indicators``; the trailing axis runs
    over candidates.
    """
    alpha = np.asarray(d) / (np.asarray(indicators) + eps) ** t_exp
    return alpha / alpha.sum(axis=-1, keepdims=True)


def cweno_reconstruct(averages, sizes, cfg: CwenoConfig, center: float = 0.0,
                      eps=None) -> CwenoResult:
    """Reconstruct one cell from the 2g+1 averages centered on it.

    A scalar ``sizes`` selects the uniform path (polynomials in the cell-width
    scaled variable); an array of the 2g+1 widths selects the non-uniform path
    (physical variable).  ``eps`` overrides the configured eps(h) law.
    """
    u = np.asarray(averages, dtype=float)
    g = cfg.g
    if u.shape != (2 * g + 1,):
        raise ValueError("stencil must hold exactly 2g+1 averages")
    if np.isscalar(sizes):
        h = float(sizes)

        def fit(k, r):
            lo = g - r
            diffs = build_diff_table(u[lo:lo + k + 1], mode="undivided")
            return interpolant(k, r, diffs, h, center)
    else:
        s = np.asarray(sizes, dtype=float)
        if s.shape != u.shape:
            raise ValueError("sizes must match the stencil")
        h = float(s[g])

        def fit(k, r):
            lo = g - r
            diffs = build_diff_table(u[lo:lo + k + 1], s[lo:lo + k + 1],
                                     mode="divided")
            return interpolant(k, r, diffs, s[lo:lo + k + 1], center)

    p_opt = fit(2 * g, g)
    low = [fit(g, r) for r in range(g, -1, -1)]

    d = np.asarray(cfg.d)
    c0 = p_opt.coeffs.copy()
    for dk, p in zip(d[1:], low):
        c0[: g + 1] -= dk * p.coeffs
    p0 = Poly(p_opt.center, p_opt.scale, c0 / d[0])
    polys = (p0, *low)

    cell = (center - h / 2, center + h / 2)
    indicators = np.array([jiang_shu(p, cell) for p in polys])
    if cfg.force_linear_weights:
        omegas = d.copy()
    else:
        e = cfg.eps(h) if eps is None else eps
        omegas = weights_from_indicators(d, indicators, e, cfg.t_exp)

    c = omegas[0] * p0.coeffs
    for wk, p in zip(omegas[1:], low):
        c[: g + 1] += wk * p.coeffs
    p_rec = Poly(p_opt.center, p_opt.scale, c)
    return CwenoResult(p_rec, p_opt, polys, omegas, indicators)


def window_gamma_tensors(sizes, g: int) -> tuple:
    """Per-window coefficient matrices for the non-uniform batch path.

    ``sizes`` is (nwin, 2g+1).  Returns (candidate matrices ordered leftmost
    to rightmost, each (nwin, g+1, g+1), and the optimal-stencil matrices
    (nwin, 2g+1, 2g+1)).
    """
    s = np.asarray(sizes, dtype=float)
    nwin = s.shape[0]
    cands = tuple(
        np.stack([gamma_matrix_nonuniform(r, g, s[w, g - r: 2 * g - r + 1])
                  for w in range(nwin)])
        for r in range(g, -1, -1))
    opt = np.stack([gamma_matrix_nonuniform(g, 2 * g, s[w])
                    for w in range(nwin)])
    return cands, opt


def reconstruct_windows(windows, cfg: CwenoConfig, h=None, sizes=None,
                        gammas=None, eps=None):
    """Reconstruct many cells at once.

    windows: (..., 2g+1) averages with the stencil on the trailing axis.
    Uniform grids pass the scalar width ``h``; non-uniform grids pass
    windows of shape (nwin, m, 2g+1) together with ``sizes`` (nwin, 2g+1)
    and optionally the cached ``gammas`` from window_gamma_tensors.

    Returns (coeffs, omegas, indicators): coeffs (..., 2g+1) holds each cell's
    reconstruction in its width-scaled local variable, the others are
    (..., g+2) aligned with the candidate order of CwenoResult.
    """
    u = np.asarray(windows, dtype=float)
    g = cfg.g
    n = 2 * g + 1
    if u.shape[-1] != n:
        raise ValueError("windows must hold 2g+1 averages each")

    if sizes is None:
        if h is None:
            raise ValueError("uniform path needs the cell width h")
        levels = [u]
        for p in range(2, n + 1):
            prev = levels[-1]
            levels.append((prev[..., 1:] - prev[..., :-1]) / p)
        low = [np.stack([levels[i][..., g - r] for i in range(g + 1)], axis=-1)
               @ gamma_matrix_uniform(r, g)
               for r in range(g, -1, -1)]
        c_opt = (np.stack([levels[i][..., 0] for i in range(n)], axis=-1)
                 @ gamma_matrix_uniform(g, 2 * g))
        widths = h
    else:
        s = np.asarray(sizes, dtype=float)
        if u.ndim != 3 or s.shape != (u.shape[0], n):
            raise ValueError("non-uniform path expects windows (nwin, m, 2g+1)"
                             " and sizes (nwin, 2g+1)")
        if gammas is None:
            gammas = window_gamma_tensors(s, g)
        g_low, g_opt = gammas
        sb = s[:, None, :]
        cs = np.cumsum(sb, axis=-1)
        levels = [u]
        for p in range(2, n + 1):
            prev = levels[-1]
            den = cs[..., p - 1:] - cs[..., : n - p + 1] + sb[..., : n - p + 1]
            levels.append((prev[..., 1:] - prev[..., :-1]) / den)
        widths = s[:, g]
        pw = widths[:, None, None] ** np.arange(g + 1)
        low = []
        for j, r in enumerate(range(g, -1, -1)):
            delta = np.stack([levels[i][..., g - r] for i in range(g + 1)],
                             axis=-1)
            low.append(np.einsum("wmi,wij->wmj", delta, g_low[j]) * pw)
        delta = np.stack([levels[i][..., 0] for i in range(n)], axis=-1)
        c_opt = (np.einsum("wmi,wij->wmj", delta, g_opt)
                 * widths[:, None, None] ** np.arange(n))

    d = np.asarray(cfg.d)
    acc = c_opt.copy()
    for dk, ck in zip(d[1:], low):
        acc[..., : g + 1] -= dk * ck
    stack = np.zeros(u.shape[:-1] + (g + 2, n))
    stack[..., 0, :] = acc / d[0]
    for k, ck in enumerate(low, start=1):
        stack[..., k, : g + 1] = ck

    q = unit_quadratic_form(2 * g)
    indicators = np.einsum("...ki,ij,...kj->...k", stack, q, stack)
    if cfg.force_linear_weights:
        omegas = np.broadcast_to(d, indicators.shape).copy()
    else:
        e = cfg.eps(widths) if eps is None else eps
        e = np.asarray(e)
        if e.ndim == 1 and indicators.ndim > 2:
            e = e.reshape((-1,) + (1,) * (indicators.ndim - 1))
        elif e.ndim == 1:
            e = e[:, None]
        omegas = weights_from_indicators(d, indicators, e, cfg.t_exp)
    coeffs = np.einsum("...k,...ki->...i", omegas, stack)
    return coeffs, omegas, indicators


def _undivided_functional(start: int, i: int, n: int) -> list:
    """Level-i undivided difference based at cell ``start`` as an exact
    functional on n averages."""
    v = [Fraction(0)] * n
    for s in range(i):
        v[start + s] = Fraction((-1) ** (i - 1 - s) * comb(i - 1, s),
                                factorial(i))
    return v


def _point_functional(k: int, r: int, start: int, xi: Fraction,
                      n: int) -> list:
    """Boundary value of the degree-k offset-r interpolant as an exact
    functional on n averages; the stencil begins at window cell ``start``."""
    v = [Fraction(0)] * n
    for i in range(1, k + 2):
        weight = sum((m * gamma_uniform(r, i, m) * xi ** (m - 1)
                      for m in range(1, i + 1)), Fraction(0))
        for j, c in enumerate(_undivided_functional(start, i, n)):
            v[j] += weight * c
    return v


@lru_cache(maxsize=None)
def weno_optimal_weights(g: int, x_rel) -> tuple:
    """Exact optimal weights of the boundary-point WENO operator.

    x_rel is the evaluation point in cell widths from the cell center; only
    the two boundaries +-1/2 admit a solution in general.  Weights are
    returned for candidate offsets r = 0..g.
    """
    if g not in _VALID_G:
        raise ValueError(f"unsupported half-degree {g}")
    xi = Fraction(x_rel)
    if abs(xi) != Fraction(1, 2):
        raise ValueError("optimal weights exist at cell boundaries only")
    n = 2 * g + 1
    cols = [_point_functional(g, r, g - r, xi, n) for r in range(g + 1)]
    rhs = _point_functional(2 * g, g, 0, xi, n)

    rows = [[cols[r][j] for r in range(g + 1)] + [rhs[j]] for j in range(n)]
    rank, piv = 0, []
    for c in range(g + 1):
        p = next((i for i in range(rank, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        lead = rows[rank][c]
        rows[rank] = [x / lead for x in rows[rank]]
        for i in range(n):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        piv.append(c)
        rank += 1
    if rank < g + 1:
        raise ValueError("edge weight system is rank deficient")
    for i in range(rank, n):
        if rows[i][-1] != 0:
            raise ValueError("edge weight system is inconsistent")
    x = [Fraction(0)] * (g + 1)
    for i, c in enumerate(piv):
        x[c] = rows[i][-1]
    return tuple(x)


def weno_reconstruct_point(averages, x_rel, g: int, eps, t_exp: int = 2):
    """Classical WENO boundary value on a uniform stencil of 2g+1 averages.

    x_rel = -1/2 or +1/2 picks the left or right boundary of the central
    cell, measured in cell widths.  eps regularizes the weight denominators
    and is the caller's responsibility to scale with the grid.
    """
    u = np.asarray(averages, dtype=float)
    if u.shape != (2 * g + 1,):
        raise ValueError("stencil must hold exactly 2g+1 averages")
    d_opt = np.array([float(w) for w in weno_optimal_weights(g, x_rel)])
    cands = [interpolant(g, r,
                         build_diff_table(u[g - r: 2 * g - r + 1],
                                          mode="undivided"), 1.0)
             for r in range(g + 1)]
    indicators = np.array([jiang_shu(p, (-0.5, 0.5)) for p in cands])
    omegas = weights_from_indicators(d_opt, indicators, eps, t_exp)
    values = np.array([p.eval(float(x_rel)) for p in cands])
    return float(omegas @ values)


def cweno3_disc_ratio(d0: float, averages=(1.0, 0.0, 0.0)) -> float:
    """Ratio I[central]/I[optimal] for the order-3 operator on step data,
    under the variant coefficient split d_left = d_right = d0/2.

    The split matches the normalized profile only at d0 = 1/2 but admits the
    closed form below for every d0 in (0, 1], which is what the scan over d0
    reports.
    """
    if not 0.0 < d0 <= 1.0:
        raise ValueError("d0 must lie in (0, 1]")
    u = np.asarray(averages, dtype=float)
    p_opt = interpolant(2, 1, build_diff_table(u, mode="undivided"), 1.0)
    p_l = interpolant(1, 1, build_diff_table(u[:2], mode="undivided"), 1.0)
    p_r = interpolant(1, 0, build_diff_table(u[1:], mode="undivided"), 1.0)
    c = p_opt.coeffs.copy()
    c[:2] -= 0.5 * d0 * (p_l.coeffs + p_r.coeffs)
    p0 = Poly(0.0, 1.0, c / d0)
    cell = (-0.5, 0.5)
    return jiang_shu(p0, cell) / jiang_shu(p_opt, cell)


def cweno3_disc_ratio_closed_form(d0: float) -> float:
    """Value of cweno3_disc_ratio on the unit step, as a rational function."""
    return (3.0 * d0 * d0 - 6.0 * d0 + 16.0) / (16.0 * d0 * d0)
