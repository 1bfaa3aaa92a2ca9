"""Difference tables and interpolating polynomials in monomial form.

Reconstruction polynomials are stored in a local variable xi = (x - center)/scale:
scale = 1 gives physical coordinates (non-uniform grids), scale = h gives the
cell-width-scaled variable used on uniform grids, where the interpolation
coefficients are grid-independent rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npp


@dataclass(frozen=True)
class Poly:
    center: float
    scale: float
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def eval(self, x):
        xi = (np.asarray(x, dtype=float) - self.center) / self.scale
        return npp.polyval(xi, self.coeffs)

    def derivative(self) -> "Poly":
        if self.coeffs.size == 1:
            return Poly(self.center, self.scale, np.zeros(1))
        return Poly(self.center, self.scale, npp.polyder(self.coeffs) / self.scale)

    def cell_average(self, lo: float, hi: float) -> float:
        anti = npp.polyint(self.coeffs)
        xlo = (lo - self.center) / self.scale
        xhi = (hi - self.center) / self.scale
        return float((npp.polyval(xhi, anti) - npp.polyval(xlo, anti))
                     * self.scale / (hi - lo))

    def __add__(self, other: "Poly") -> "Poly":
        if (other.center, other.scale) != (self.center, self.scale):
            raise ValueError("polynomials live in different local variables")
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return Poly(self.center, self.scale, c)

    def scaled_by(self, a: float) -> "Poly":
        return Poly(self.center, self.scale, a * self.coeffs)


@dataclass(frozen=True)
class DiffTable:
    """Triangular table of (un)divided differences of cell averages.

    levels[p-1][..., j] holds the order-p difference starting at cell j of the
    input window; level 1 is the averages themselves.
    """

    mode: str
    levels: tuple

    def level(self, p: int) -> np.ndarray:
        if not 1 <= p <= len(self.levels):
            raise ValueError("stencil exceeds the difference table")
        return self.levels[p - 1]

    @property
    def depth(self) -> int:
        return len(self.levels)


def build_diff_table(averages, sizes=None, mode: str = "divided") -> DiffTable:
    """Difference table over the trailing axis of ``averages``.

    Divided mode divides the order-p difference by the width of its p-cell
    support; undivided mode is the same recurrence with all widths set to 1,
    i.e. a division by p at level p.
    """
    if mode not in ("divided", "undivided"):
        raise ValueError(f"unknown mode {mode!r}")
    a = np.asarray(averages, dtype=float)
    n = a.shape[-1]
    if mode == "divided":
        if sizes is None:
            raise ValueError("divided mode needs cell sizes")
        h = np.broadcast_to(np.asarray(sizes, dtype=float), a.shape)
        if h.shape[-1] != n:
            raise ValueError("averages and sizes length mismatch")
        cs = np.cumsum(h, axis=-1)
    levels = [a]
    for p in range(2, n + 1):
        prev = levels[-1]
        num = prev[..., 1:] - prev[..., :-1]
        if mode == "divided":
            # sum of h[j..j+p-1] = cs[j+p-1] - cs[j] + h[j]
            den = cs[..., p - 1:] - cs[..., : n - p + 1] + h[..., : n - p + 1]
        else:
            den = p
        levels.append(num / den)
    return DiffTable(mode, tuple(levels))


@lru_cache(maxsize=None)
def _newton_basis_uniform(r: int, i: int) -> tuple:
    """Ascending coefficients of prod_{l=0}^{i-1} (x - (l - r - 1/2)), exact."""
    coeffs = [Fraction(1)]
    for l in range(i):
        node = Fraction(2 * (l - r) - 1, 2)
        shifted = [Fraction(0)] + coeffs
        coeffs = [s - node * c for s, c in zip(shifted, coeffs + [Fraction(0)])]
    return tuple(coeffs)


def gamma_uniform(r: int, i: int, m: int) -> Fraction:
    """Exact gamma coefficient for uniform grids; the published table entries
    are m times these values."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > i:
        return Fraction(0)
    return _newton_basis_uniform(r, i)[m]


def node_positions(r: int, i: int, sizes) -> np.ndarray:
    """Interface positions entering the Newton basis for offset r, relative to
    the reference cell center. ``sizes`` covers the stencil cells -r..-r+len-1,
    so index r is the reference cell."""
    h = np.asarray(sizes, dtype=float)
    if h.size < i:
        raise ValueError("insufficient neighbor sizes for the stencil")
    pos = np.empty(i)
    for l in range(i):
        s = l - r
        if s >= 1:
            pos[l] = 0.5 * h[r] + h[r + 1: r + s].sum()
        else:
            pos[l] = -0.5 * h[r] - h[r + s: r].sum()
    return pos


def gamma_nonuniform(r: int, i: int, m: int, neighbor_sizes) -> float:
    """Gamma coefficient on a non-uniform stencil, via expansion of the Newton
    basis product. With all sizes equal to h this reduces to
    h**(i-m) * gamma_uniform(r, i, m)."""
    if m < 1:
        raise ValueError("m must be positive")
    if m > i:
        return 0.0
    nodes = node_positions(r, i, neighbor_sizes)
    coeffs = np.array([1.0])
    for x0 in nodes:
        coeffs = np.concatenate(([0.0], coeffs)) - x0 * np.concatenate((coeffs, [0.0]))
    return float(coeffs[m])


@lru_cache(maxsize=None)
def gamma_matrix_uniform(r: int, k: int) -> np.ndarray:
    """G[i-1, m-1] = m * gamma_uniform(r, i, m) for 1 <= m <= i <= k+1.

    Monomial coefficients of the offset-r interpolant are delta @ G where
    delta are the undivided differences based at the stencil's leftmost cell.
    """
    G = np.zeros((k + 1, k + 1))
    for i in range(1, k + 2):
        basis = _newton_basis_uniform(r, i)
        for m in range(1, i + 1):
            G[i - 1, m - 1] = float(m * basis[m])
    G.setflags(write=False)
    return G


def gamma_matrix_nonuniform(r: int, k: int, sizes) -> np.ndarray:
    """Per-stencil analogue of gamma_matrix_uniform, for divided differences
    and physical coordinates."""
    h = np.asarray(sizes, dtype=float)
    G = np.zeros((k + 1, k + 1))
    for i in range(1, k + 2):
        nodes = node_positions(r, i, h)
        coeffs = np.array([1.0])
        for x0 in nodes:
            coeffs = np.concatenate(([0.0], coeffs)) - x0 * np.concatenate((coeffs, [0.0]))
        for m in range(1, i + 1):
            G[i - 1, m - 1] = m * coeffs[m]
    return G


def interpolant(k: int, r: int, diffs: DiffTable, sizes, center: float = 0.0) -> Poly:
    """Degree-k polynomial whose averages over stencil cells -r..-r+k match the
    data behind ``diffs``.

    ``diffs`` must be built over exactly the stencil cells, leftmost first:
    undivided mode takes a scalar cell width and returns a scaled-variable
    polynomial, divided mode takes the stencil's widths and returns a
    physical-variable polynomial centered at the reference cell.
    """
    if diffs.depth < k + 1:
        raise ValueError("stencil exceeds the difference table")
    delta = np.array([np.asarray(diffs.level(i))[..., 0] for i in range(1, k + 2)])
    if diffs.mode == "undivided":
        if not np.isscalar(sizes):
            raise ValueError("undivided mode expects the scalar cell width")
        G = gamma_matrix_uniform(r, k)
        return Poly(center, float(sizes), delta @ G)
    h = np.asarray(sizes, dtype=float)
    if h.size < k + 1:
        raise ValueError("sizes must cover the stencil")
    G = gamma_matrix_nonuniform(r, k, h[: k + 1])
    return Poly(center, 1.0, delta @ G)
