"""
spectral.py

Continuum-convention unitary Fourier transform between position amplitudes
and spatial-frequency amplitudes.

    phi(k_m) = (dx / sqrt(2 pi))^dim * sum_n psi(x_n) exp(-i k_m . x_n)

The k-grid is centred (DC in the middle): spacing dk = 2 pi / (N dx), origin
-(N/2) dk per axis, so N dx dk = 2 pi and discrete Parseval equals continuum
Parseval: sum |phi|^2 dk^dim = sum |psi|^2 dx^dim.

FFT worker threads follow QPSE_THREADS (see config.fft_workers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from . import config
from .errors import GridMismatch, NonFinite, NotNormalized, ValidationError
from .grid import DensityField, GridSpec, WaveFunction, _readonly, require_normalized


TWO_PI = 2.0 * math.pi


def kgrid_for(grid: GridSpec) -> GridSpec:
    """Conjugate centred k-grid of a spatial grid."""
    dks = tuple(TWO_PI / (n * dx) for n, dx in zip(grid.points, grid.spacing))
    origin = tuple(-(n // 2) * dk for n, dk in zip(grid.points, dks))
    return GridSpec(dim=grid.dim, points=grid.points, origin=origin, spacing=dks)


def is_conjugate(xgrid: GridSpec, kgrid: GridSpec, rel_tol: float = 1e-12) -> bool:
    if xgrid.dim != kgrid.dim or xgrid.points != kgrid.points:
        return False
    for n, dx, dk, k0 in zip(xgrid.points, xgrid.spacing, kgrid.spacing, kgrid.origin):
        if not math.isclose(n * dx * dk, TWO_PI, rel_tol=rel_tol):
            return False
        if not math.isclose(k0, -(n // 2) * dk, rel_tol=rel_tol, abs_tol=1e-300):
            return False
    return True


@dataclass(frozen=True)
class KAmplitude:
    kgrid: GridSpec
    amplitudes: np.ndarray
    xgrid: GridSpec
    time_tag: float = 0.0

    def __post_init__(self) -> None:
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.shape != self.kgrid.shape:
            raise ValidationError(f"k-amplitudes shape {a.shape} does not match k-grid shape {self.kgrid.shape}")
        object.__setattr__(self, "amplitudes", _readonly(a))

    def mass(self) -> float:
        a = self.amplitudes
        return float(np.sum(a.real**2 + a.imag**2) * self.kgrid.cell_volume)


def _axis_phase(kgrid: GridSpec, xgrid: GridSpec, sign: float) -> np.ndarray:
    """exp(sign * i * k . x0) on the k-grid, x0 the spatial origin."""
    phase = np.ones(kgrid.shape, dtype=np.complex128)
    for axis, (k, x0) in enumerate(zip(kgrid.axes(), xgrid.origin)):
        shape = [1] * kgrid.dim
        shape[axis] = k.size
        phase = phase * np.exp(sign * 1j * k * x0).reshape(shape)
    return phase


def forward_amplitudes(amplitudes: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Raw forward transform of an array on `grid` (no normalization check)."""
    a = np.asarray(amplitudes, dtype=np.complex128)
    if not np.all(np.isfinite(a)):
        raise NonFinite("amplitudes contain NaN or inf")
    kgrid = kgrid_for(grid)
    scale = math.prod(math.sqrt(dx / dk) for dx, dk in zip(grid.spacing, kgrid.spacing))
    out = scipy.fft.fftn(a, norm="ortho", workers=config.fft_workers())
    out = scipy.fft.fftshift(out)
    return out * _axis_phase(kgrid, grid, -1.0) * scale


def inverse_amplitudes(amplitudes: np.ndarray, kgrid: GridSpec, grid: GridSpec) -> np.ndarray:
    """Raw inverse transform from `kgrid` onto spatial `grid`."""
    if not is_conjugate(grid, kgrid):
        raise GridMismatch("k-grid is not the conjugate of the target spatial grid")
    a = np.asarray(amplitudes, dtype=np.complex128)
    if not np.all(np.isfinite(a)):
        raise NonFinite("k-amplitudes contain NaN or inf")
    scale = math.prod(math.sqrt(dk / dx) for dx, dk in zip(grid.spacing, kgrid.spacing))
    c = scipy.fft.ifftshift(a * _axis_phase(kgrid, grid, 1.0))
    return scipy.fft.ifftn(c, norm="ortho", workers=config.fft_workers()) * scale


def to_k_space(psi: WaveFunction) -> KAmplitude:
    require_normalized(psi)
    kgrid = kgrid_for(psi.grid)
    return KAmplitude(
        kgrid=kgrid,
        amplitudes=forward_amplitudes(psi.amplitudes, psi.grid),
        xgrid=psi.grid,
        time_tag=psi.time_tag,
    )


def from_k_space(phi: KAmplitude, grid: GridSpec | None = None) -> WaveFunction:
    target = phi.xgrid if grid is None else grid
    residual = abs(phi.mass() - 1.0)
    if residual > config.NORMALIZED_TOL:
        raise NotNormalized(f"k-amplitude mass differs from 1 by {residual:.3e}")
    return WaveFunction(
        grid=target,
        amplitudes=inverse_amplitudes(phi.amplitudes, phi.kgrid, target),
        time_tag=phi.time_tag,
    )


def density_k(phi: KAmplitude) -> DensityField:
    a = phi.amplitudes
    return DensityField(grid=phi.kgrid, values=a.real**2 + a.imag**2, cell_volume=phi.kgrid.cell_volume)


def evaluate_k(psi: WaveFunction, k: np.ndarray, chunk: int = 512) -> np.ndarray:
    """
    phi(k) at arbitrary 1D frequencies by direct summation (band-limited
    interpolation of the grid transform). Used where off-grid k values are
    needed, e.g. the boosted momentum measure.
    """
    if psi.grid.dim != 1:
        raise ValidationError("evaluate_k supports 1D states only")
    x = psi.grid.axes()[0]
    dx = psi.grid.spacing[0]
    k = np.asarray(k, dtype=np.float64).ravel()
    out = np.empty(k.size, dtype=np.complex128)
    for start in range(0, k.size, chunk):
        kc = k[start:start + chunk]
        out[start:start + chunk] = np.exp(-1j * np.outer(kc, x)) @ psi.amplitudes
    return (dx / math.sqrt(TWO_PI)) * out
