"""One-dimensional cell geometry and ghost-cell filling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BC_TAGS = ("periodic", "outflow", "reflective")


@dataclass(frozen=True)
class Grid1D:
    """Strictly increasing cell edges on [a, b] plus a boundary tag.

    ``uniform`` marks grids whose cells all have the same width; it selects
    the scaled-coordinate reconstruction path, so it must only be set by
    constructors that guarantee equal spacing.
    """

    a: float
    b: float
    edges: np.ndarray
    bc: str = "periodic"
    uniform: bool = False
    sizes: np.ndarray = field(init=False, repr=False)
    centers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        edges = np.atleast_1d(np.asarray(self.edges, dtype=float))
        if self.bc not in BC_TAGS:
            raise ValueError(f"unknown boundary tag {self.bc!r}")
        if self.a >= self.b:
            raise ValueError("need a < b")
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("need at least two edges")
        if edges[0] != self.a or edges[-1] != self.b:
            raise ValueError("edges must run from a to b")
        sizes = np.diff(edges)
        if np.any(sizes <= 0.0):
            raise ValueError("edges must be strictly increasing")
        for name, val in (("edges", edges), ("sizes", sizes),
                          ("centers", 0.5 * (edges[:-1] + edges[1:]))):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def n_cells(self) -> int:
        return self.edges.size - 1

    @property
    def length(self) -> float:
        return self.b - self.a

    def cache_key(self) -> tuple:
        return (self.edges.tobytes(), self.bc)


def make_uniform(a: float, b: float, N: int, bc: str = "periodic") -> Grid1D:
    """Equispaced grid. Edges are a + (b-a)*k/N so that dyadic fractions of
    the domain (the midpoint for even N, in particular) come out exact."""
    if N < 1:
        raise ValueError("need at least one cell")
    if a >= b:
        raise ValueError("need a < b")
    edges = a + (b - a) * (np.arange(N + 1) / N)
    edges[0], edges[-1] = a, b
    return Grid1D(a, b, edges, bc, uniform=True)


def make_random_nonuniform(a: float, b: float, N: int, seed: int,
                           ratio_max: float, bc: str = "periodic") -> Grid1D:
    """Uniform grid with seeded random edge perturbations.

    Interior edges move by at most delta*H with
    delta = (ratio_max - 1) / (2*(ratio_max + 1)), which bounds the ratio of
    the largest to the smallest cell by ratio_max.
    """
    if ratio_max < 1.0:
        raise ValueError("ratio_max must be >= 1")
    if ratio_max == 1.0 or N == 1:
        return make_uniform(a, b, N, bc)
    H = (b - a) / N
    delta = (ratio_max - 1.0) / (2.0 * (ratio_max + 1.0)) * (1.0 - 1e-12)
    rng = np.random.default_rng(seed)
    edges = a + (b - a) * (np.arange(N + 1) / N)
    edges[1:-1] += rng.uniform(-delta, delta, N - 1) * H
    edges[0], edges[-1] = a, b
    return Grid1D(a, b, edges, bc, uniform=False)


def _ghost_indices(N: int, width: int, bc: str) -> tuple[np.ndarray, np.ndarray]:
    """Interior indices for positions -width..N+width-1 and, for reflective
    fill, the mask of positions whose odd components change sign."""
    idx = np.arange(-width, N + width)
    if bc == "periodic":
        return idx % N, np.zeros(idx.size, dtype=bool)
    if bc == "outflow":
        return np.clip(idx, 0, N - 1), np.zeros(idx.size, dtype=bool)
    j = idx % (2 * N)
    flipped = j >= N
    j = np.where(flipped, 2 * N - 1 - j, j)
    return j, flipped


def fill_ghost(grid: Grid1D, u: np.ndarray, width: int,
               odd_mask: np.ndarray | None = None) -> np.ndarray:
    """Extend cell averages u (N,) or (N, m) by ``width`` ghost cells per side."""
    u = np.asarray(u, dtype=float)
    N = grid.n_cells
    if u.shape[0] != N:
        raise ValueError("averages do not match the grid")
    idx, flipped = _ghost_indices(N, width, grid.bc)
    out = u[idx].copy()
    if grid.bc == "reflective" and odd_mask is not None and np.any(flipped):
        if out.ndim == 1:
            if odd_mask[0]:
                out[flipped] = -out[flipped]
        else:
            out[np.ix_(flipped, np.asarray(odd_mask, dtype=bool))] *= -1.0
    return out


def ghost_sizes(grid: Grid1D, width: int) -> np.ndarray:
    """Cell widths for positions -width..N+width-1, mirroring/wrapping per bc."""
    idx, _ = _ghost_indices(grid.n_cells, width, grid.bc)
    return grid.sizes[idx]


def ghost_centers(grid: Grid1D, width: int) -> np.ndarray:
    """Cell-center positions consistent with ghost_sizes.

    Ghost centers are synthesized by accumulating ghost widths outward from
    the physical domain, which is the geometry the reconstruction needs; for
    periodic grids this reproduces the wrapped cells shifted by the period.
    """
    h = ghost_sizes(grid, width)
    left_edge = grid.a - h[:width].sum()
    edges = left_edge + np.concatenate(([0.0], np.cumsum(h)))
    return 0.5 * (edges[:-1] + edges[1:])
