"""Hyperbolic systems used by the solver: fluxes, wave speeds, eigensystems,
sources, and reflection masks, each packaged as an immutable ModelSpec.

All callables are vectorized over leading axes; states live on the trailing
axis of length m.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidStateError", "SingularPointError", "ModelSpec", "advection",
    "burgers", "euler", "euler_radial", "shallow_water", "euler_conserved",
    "swe_pressure",
]


class InvalidStateError(ValueError):
    """State outside the admissible set (vacuum, negative pressure...)."""


class SingularPointError(ValueError):
    """A source term was evaluated at its geometric singularity."""


@dataclass(frozen=True)
class ModelSpec:
    """One hyperbolic balance law.

    flux(u) and max_wave_speed(u) work on (..., m) states; eigensystem(u)
    returns (eigenvalues (..., m), L (..., m, m), R (..., m, m)) with L @ R
    the identity; source(u, x) may be None.  odd_mask marks components that
    change sign under spatial reflection.
    """

    name: str
    m: int
    flux: callable
    max_wave_speed: callable
    eigensystem: callable = None
    source: callable = None
    odd_mask: np.ndarray = None
    constants: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("component count must be positive")
        mask = (np.zeros(self.m, dtype=bool) if self.odd_mask is None
                else np.asarray(self.odd_mask, dtype=bool))
        if mask.shape != (self.m,):
            raise ValueError("odd_mask length must equal m")
        mask.setflags(write=False)
        object.__setattr__(self, "odd_mask", mask)


def _scalar_eigensystem(u):
    one = np.ones(u.shape[:-1] + (1, 1))
    return u.copy(), one, one.copy()


def advection() -> ModelSpec:
    """Scalar transport at unit speed."""
    return ModelSpec(
        name="advection", m=1,
        flux=lambda u: u.copy(),
        max_wave_speed=lambda u: np.ones(u.shape[:-1]),
        eigensystem=_scalar_eigensystem)


def burgers() -> ModelSpec:
    return ModelSpec(
        name="burgers", m=1,
        flux=lambda u: 0.5 * u * u,
        max_wave_speed=lambda u: np.abs(u[..., 0]),
        eigensystem=_scalar_eigensystem)


def euler_conserved(rho, v, p, gamma: float = 1.4) -> np.ndarray:
    """Conserved state (rho, rho v, E) from primitive values."""
    rho, v, p = np.broadcast_arrays(*np.atleast_1d(rho, v, p))
    E = p / (gamma - 1.0) + 0.5 * rho * v * v
    return np.stack([rho, rho * v, E], axis=-1)


def _euler_primitives(u, gamma):
    rho = u[..., 0]
    v = u[..., 1] / rho
    p = (u[..., 2] - 0.5 * u[..., 1] * v) * (gamma - 1.0)
    return rho, v, p


def euler(gamma: float = 1.4) -> ModelSpec:
    """Compressible Euler equations for an ideal gas."""
    if gamma <= 1.0:
        raise ValueError("gamma must exceed 1")

    def flux(u):
        rho, v, p = _euler_primitives(u, gamma)
        return np.stack([u[..., 1], u[..., 1] * v + p,
                         v * (u[..., 2] + p)], axis=-1)

    def max_wave_speed(u):
        rho, v, p = _euler_primitives(u, gamma)
        return np.abs(v) + np.sqrt(gamma * p / rho)

    def eigensystem(u):
        rho, v, p = _euler_primitives(u, gamma)
        if np.any(rho <= 0.0) or np.any(p <= 0.0):
            raise InvalidStateError("nonpositive density or pressure")
        c = np.sqrt(gamma * p / rho)
        H = (u[..., 2] + p) / rho
        lam = np.stack([v - c, v, v + c], axis=-1)
        one = np.ones_like(v)
        R = np.stack([
            np.stack([one, one, one], axis=-1),
            np.stack([v - c, v, v + c], axis=-1),
            np.stack([H - v * c, 0.5 * v * v, H + v * c], axis=-1),
        ], axis=-2)
        b1 = (gamma - 1.0) / (c * c)
        b2 = 0.5 * b1 * v * v
        L = np.stack([
            np.stack([0.5 * (b2 + v / c), -0.5 * (b1 * v + 1.0 / c),
                      0.5 * b1], axis=-1),
            np.stack([1.0 - b2, b1 * v, -b1], axis=-1),
            np.stack([0.5 * (b2 - v / c), -0.5 * (b1 * v - 1.0 / c),
                      0.5 * b1], axis=-1),
        ], axis=-2)
        return lam, L, R

    return ModelSpec(
        name="euler", m=3, flux=flux, max_wave_speed=max_wave_speed,
        eigensystem=eigensystem, odd_mask=np.array([False, True, False]),
        constants={"gamma": gamma})


def euler_radial(n_dim: int, gamma: float = 1.4) -> ModelSpec:
    """Euler equations with the geometric source of a radially symmetric
    flow in n_dim dimensions, written in the radius r alone.

    The source must never be sampled at r = 0.
    """
    if n_dim not in (2, 3):
        raise ValueError("n_dim must be 2 or 3")
    base = euler(gamma)

    def source(u, x):
        x = np.asarray(x, dtype=float)
        if np.any(x == 0.0):
            raise SingularPointError(
                "radial source evaluated at r = 0; shift the quadrature nodes")
        rho, v, p = _euler_primitives(u, gamma)
        factor = -(n_dim - 1) / x
        return factor[..., None] * np.stack(
            [u[..., 1], u[..., 1] * v, v * p], axis=-1)

    return ModelSpec(
        name=f"euler_radial{n_dim}d", m=3, flux=base.flux,
        max_wave_speed=base.max_wave_speed, eigensystem=base.eigensystem,
        source=source, odd_mask=base.odd_mask,
        constants={"gamma": gamma, "n_dim": n_dim})


def swe_pressure(h, g_const: float):
    """Hydrostatic pressure term of the momentum flux, 0.5*g*h*h.

    Kept as the single definition so flux and source corrections cancel
    bitwise on balanced states.
    """
    return 0.5 * g_const * h * h


def shallow_water(g_const: float = 9.81, z=None, dz=None) -> ModelSpec:
    """Shallow water over topography z(x).

    With an analytic slope dz the momentum source -g*h*z'(x) is attached;
    without it the bottom is flat (or handled by the well-balanced path,
    which manages topography on its own).
    """
    if g_const <= 0.0:
        raise ValueError("g_const must be positive")

    def flux(u):
        h, q = u[..., 0], u[..., 1]
        return np.stack([q, q * q / h + swe_pressure(h, g_const)], axis=-1)

    def max_wave_speed(u):
        h, q = u[..., 0], u[..., 1]
        return np.abs(q / h) + np.sqrt(g_const * h)

    def eigensystem(u):
        h, q = u[..., 0], u[..., 1]
        if np.any(h <= 0.0):
            raise InvalidStateError("nonpositive water height")
        v = q / h
        c = np.sqrt(g_const * h)
        lam = np.stack([v - c, v + c], axis=-1)
        one = np.ones_like(v)
        R = np.stack([
            np.stack([one, one], axis=-1),
            np.stack([v - c, v + c], axis=-1),
        ], axis=-2)
        inv2c = 0.5 / c
        L = np.stack([
            np.stack([(v + c) * inv2c, -one * inv2c], axis=-1),
            np.stack([(c - v) * inv2c, one * inv2c], axis=-1),
        ], axis=-2)
        return lam, L, R

    source = None
    if dz is not None:
        def source(u, x):
            slope = np.asarray(dz(np.asarray(x, dtype=float)))
            zero = np.zeros_like(u[..., 0])
            return np.stack([zero, -g_const * u[..., 0] * slope], axis=-1)

    return ModelSpec(
        name="shallow_water", m=2, flux=flux,
        max_wave_speed=max_wave_speed, eigensystem=eigensystem,
        source=source, odd_mask=np.array([False, True]),
        constants={"g_const": g_const, "z": z, "dz": dz})
