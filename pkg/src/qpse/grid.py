"""
grid.py

Uniform-grid representation of wavefunctions and densities.

Types
- GridSpec: dim in {1, 2, 3}, per-axis points (power of two, >= 8), origin, spacing
- WaveFunction: complex amplitudes on a GridSpec, plus a time tag
- DensityField: nonnegative density on a GridSpec with its cell volume

Notes
- Natural units (hbar = m = 1): momentum and spatial frequency coincide.
- Quadrature is the Riemann sum over cells: integral f = sum(f) * (dx)^dim.
- Grids are periodic for transform purposes, so states must decay at the box edges.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import GridTooSmall, NonFinite, NotNormalized, ValidationError, ZeroNorm


logger = logging.getLogger(__name__)


def _as_axis_tuple(value, dim: int, name: str, cast) -> tuple:
    if np.ndim(value) == 0:
        return tuple(cast(value) for _ in range(dim))
    out = tuple(cast(v) for v in value)
    if len(out) != dim:
        raise ValidationError(f"{name} has {len(out)} entries; grid dim is {dim}")
    return out


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GridSpec:
    dim: int
    points: tuple[int, ...]
    origin: tuple[float, ...]
    spacing: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise ValidationError(f"grid dim must be 1, 2 or 3 (got {self.dim})")

        object.__setattr__(self, "points", _as_axis_tuple(self.points, self.dim, "points", int))
        object.__setattr__(self, "origin", _as_axis_tuple(self.origin, self.dim, "origin", float))
        object.__setattr__(self, "spacing", _as_axis_tuple(self.spacing, self.dim, "spacing", float))

        for n in self.points:
            if n < config.MIN_POINTS or n & (n - 1) != 0:
                raise ValidationError(f"points per axis must be a power of two >= {config.MIN_POINTS} (got {n})")
        for dx in self.spacing:
            if not np.isfinite(dx) or dx <= 0:
                raise ValidationError(f"spacing must be finite and > 0 (got {dx})")
        for x0 in self.origin:
            if not np.isfinite(x0):
                raise ValidationError(f"origin must be finite (got {x0})")

    @classmethod
    def centered(cls, dim: int, points: int, extent: float) -> "GridSpec":
        """Grid of `points` cells per axis spanning [-extent/2, extent/2)."""
        spacing = float(extent) / int(points)
        return cls(dim=dim, points=(points,) * dim, origin=(-float(extent) / 2,) * dim, spacing=(spacing,) * dim)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def extent(self) -> tuple[float, ...]:
        return tuple(n * dx for n, dx in zip(self.points, self.spacing))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axes(self) -> list[np.ndarray]:
        """Coordinate vector x_n = x0 + n * dx for each axis."""
        return [x0 + dx * np.arange(n) for n, x0, dx in zip(self.points, self.origin, self.spacing)]

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")

    def axis_grid(self, axis: int) -> "GridSpec":
        """1D grid of a single axis."""
        return GridSpec(dim=1, points=(self.points[axis],), origin=(self.origin[axis],), spacing=(self.spacing[axis],))


@dataclass(frozen=True)
class WaveFunction:
    grid: GridSpec
    amplitudes: np.ndarray
    time_tag: float = 0.0

    def __post_init__(self) -> None:
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.shape != self.grid.shape:
            raise ValidationError(f"amplitudes shape {a.shape} does not match grid shape {self.grid.shape}")
        object.__setattr__(self, "amplitudes", _readonly(a))
        object.__setattr__(self, "time_tag", float(self.time_tag))

    def replace(self, amplitudes: np.ndarray | None = None, grid: GridSpec | None = None,
                time_tag: float | None = None) -> "WaveFunction":
        return WaveFunction(
            grid=self.grid if grid is None else grid,
            amplitudes=self.amplitudes if amplitudes is None else amplitudes,
            time_tag=self.time_tag if time_tag is None else time_tag,
        )


@dataclass(frozen=True)
class DensityField:
    grid: GridSpec
    values: np.ndarray
    cell_volume: float = field(default=0.0)

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise ValidationError(f"density shape {v.shape} does not match grid shape {self.grid.shape}")
        if np.any(v < 0):
            raise ValidationError("density has negative entries")
        object.__setattr__(self, "values", _readonly(v))
        if not self.cell_volume:
            object.__setattr__(self, "cell_volume", self.grid.cell_volume)


# -----------------------------
# Operations
# -----------------------------

def mass(psi: WaveFunction) -> float:
    """Total probability sum |psi|^2 * cell volume."""
    a = psi.amplitudes
    return float(np.sum(a.real**2 + a.imag**2) * psi.grid.cell_volume)


def require_normalized(psi: WaveFunction, tol: float = config.NORMALIZED_TOL) -> None:
    residual = abs(mass(psi) - 1.0)
    if residual > tol:
        raise NotNormalized(f"state mass differs from 1 by {residual:.3e} (tolerance {tol:.0e})")


def edge_amplitude(amplitudes: np.ndarray) -> float:
    """Largest |amplitude| on the boundary cells of any axis."""
    a = np.abs(np.asarray(amplitudes))
    worst = 0.0
    for axis in range(a.ndim):
        lo = np.take(a, 0, axis=axis)
        hi = np.take(a, -1, axis=axis)
        worst = max(worst, float(lo.max()), float(hi.max()))
    return worst


def _edge_mask(shape: tuple[int, ...], cells: int | None) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    for axis, n in enumerate(shape):
        c = max(1, n // 32) if cells is None else int(cells)
        idx = [slice(None)] * len(shape)
        idx[axis] = slice(0, c)
        mask[tuple(idx)] = True
        idx[axis] = slice(n - c, n)
        mask[tuple(idx)] = True
    return mask


def edge_mass(values: np.ndarray, grid: GridSpec, cells: int | None = None) -> float:
    """
    Probability in the outermost `cells` cells of every axis (default N/32).

    `values` is a density (|psi|^2 summed over any internal components).
    """
    v = np.asarray(values, dtype=np.float64)
    return float(np.sum(v[_edge_mask(v.shape, cells)]) * grid.cell_volume)


def check_edges(psi: WaveFunction, tol: float = config.EDGE_AMPLITUDE_TOL) -> None:
    """Raise GridTooSmall when the state has not decayed at the box edges."""
    amp = edge_amplitude(psi.amplitudes)
    if amp > tol:
        raise GridTooSmall(f"GridTooSmall: edge amplitude {amp:.3e} exceeds {tol:.0e}; enlarge the box")


def normalize(psi: WaveFunction) -> WaveFunction:
    m = mass(psi)
    if not np.isfinite(m):
        raise NonFinite("amplitudes contain NaN or inf")
    if m < config.ZERO_MASS:
        raise ZeroNorm(f"state has numerically zero mass ({m:.3e})")

    out = psi.replace(amplitudes=psi.amplitudes / np.sqrt(m))

    amp = edge_amplitude(out.amplitudes)
    if amp > config.EDGE_AMPLITUDE_TOL:
        logger.warning("edge amplitude %.3e above %.0e; periodic wraparound may bias quadrature",
                       amp, config.EDGE_AMPLITUDE_TOL)
    return out


def density(psi: WaveFunction) -> DensityField:
    require_normalized(psi)
    a = psi.amplitudes
    return DensityField(grid=psi.grid, values=a.real**2 + a.imag**2, cell_volume=psi.grid.cell_volume)


def integrate(f: np.ndarray, grid: GridSpec) -> float:
    f = np.asarray(f, dtype=np.float64)
    if f.shape != grid.shape:
        raise ValidationError(f"integrand shape {f.shape} does not match grid shape {grid.shape}")
    if not np.all(np.isfinite(f)):
        raise NonFinite("integrand contains NaN or inf")
    return float(np.sum(f) * grid.cell_volume)


def inner(psi: WaveFunction, phi: WaveFunction) -> complex:
    """<psi|phi> on a shared grid."""
    if psi.grid != phi.grid:
        raise ValidationError("inner product needs both states on the same grid")
    return complex(np.vdot(psi.amplitudes, phi.amplitudes) * psi.grid.cell_volume)


def marginal(rho: DensityField, axis: int) -> DensityField:
    """Integrate a density over every axis except `axis`."""
    others = tuple(i for i in range(rho.grid.dim) if i != axis)
    weight = float(np.prod([rho.grid.spacing[i] for i in others])) if others else 1.0
    values = rho.values.sum(axis=others) * weight if others else rho.values
    sub = rho.grid.axis_grid(axis)
    return DensityField(grid=sub, values=values, cell_volume=sub.cell_volume)


def moments(rho: DensityField) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Mean and standard deviation per axis."""
    means, stds = [], []
    for axis in range(rho.grid.dim):
        m = marginal(rho, axis)
        x = m.grid.axes()[0]
        w = m.values * m.cell_volume
        total = float(np.sum(w))
        mu = float(np.sum(w * x) / total)
        var = float(np.sum(w * (x - mu) ** 2) / total)
        means.append(mu)
        stds.append(float(np.sqrt(var)))
    return tuple(means), tuple(stds)
