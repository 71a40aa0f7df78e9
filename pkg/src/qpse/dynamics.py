"""
dynamics.py

Split-step Fourier time evolution (hbar = m = 1) and entropy-vs-time series.

    psi(t + dt) = exp(-i V dt/2) F^-1 exp(-i k^2 dt/2) F exp(-i V dt/2) psi(t)

Potentials
- free: V = 0 (the kinetic step is exact, so |phi(k)| never changes)
- harmonic: V(x) = 1/2 omega^2 |x|^2, with dt <= 0.1 / omega

Outputs
- evolve(): list of (t, WaveFunction) snapshots, t = 0 included
- entropy_series(): pandas DataFrame with frozen columns
  t, s_r, s_k, s_total, bbm_margin, norm_residual
  plus df.attrs["n_decreasing"] / df.attrs["max_decrease"] for S_total

Notes
- The entropy trend is reported, never gated.
- Evolution aborts with EdgeMassExceeded once more than 1e-8 of the
  probability sits in the outer N/32 cells of any axis (periodic wraparound).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import scipy.fft

from . import config
from .entropy import continuous_entropy
from .errors import EdgeMassExceeded, NonFinite, ValidationError
from .grid import WaveFunction, density, edge_mass, moments, require_normalized
from .spectral import density_k, to_k_space


logger = logging.getLogger(__name__)


SERIES_COLUMNS = ["t", "s_r", "s_k", "s_total", "bbm_margin", "norm_residual"]
POTENTIALS = ("free", "harmonic")
DECREASE_TOL = 1e-12


@dataclass(frozen=True)
class Potential:
    kind: str = "free"
    omega: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in POTENTIALS:
            raise ValidationError(f"potential must be one of {POTENTIALS} (got {self.kind!r})")
        if self.kind == "harmonic":
            if self.omega is None or not math.isfinite(self.omega) or not self.omega > 0:
                raise ValidationError(f"harmonic potential needs omega > 0 (got {self.omega})")
        elif self.omega is not None:
            raise ValidationError("omega is only used by the harmonic potential")

    def values(self, grid) -> np.ndarray:
        if self.kind == "free":
            return np.zeros(grid.shape)
        r2 = sum(x**2 for x in grid.mesh())
        return 0.5 * self.omega**2 * r2


@dataclass(frozen=True)
class EvolutionSpec:
    potential: Potential = field(default_factory=Potential)
    dt: float = 0.01
    steps: int = 100
    record_every: int = 1

    def __post_init__(self) -> None:
        self.validate()

    @property
    def horizon(self) -> float:
        return self.dt * self.steps

    def validate(self) -> None:
        if not math.isfinite(self.dt) or not self.dt > 0:
            raise ValidationError(f"dt must be finite and > 0 (got {self.dt})")
        if int(self.steps) != self.steps or self.steps < 0:
            raise ValidationError(f"steps must be a nonnegative integer (got {self.steps})")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValidationError(f"record_every must be an integer >= 1 (got {self.record_every})")
        if not math.isfinite(self.horizon):
            raise ValidationError("steps * dt must be finite")
        if self.potential.kind == "harmonic":
            limit = 0.1 / self.potential.omega
            if self.dt > limit * (1.0 + 1e-12):
                raise ValidationError(f"dt = {self.dt} exceeds 0.1/omega = {limit:.6g}")


def free_gaussian_width(sigma0: float, t: float) -> float:
    """Position standard deviation of a free, unchirped Gaussian at time t."""
    if not sigma0 > 0:
        raise ValidationError(f"sigma0 must be > 0 (got {sigma0})")
    return math.sqrt(sigma0**2 + t**2 / (4.0 * sigma0**2))


def _k_squared(grid) -> np.ndarray:
    """|k|^2 in FFT (unshifted) order."""
    k2 = np.zeros(grid.shape)
    for axis, (n, dx) in enumerate(zip(grid.points, grid.spacing)):
        k = 2.0 * math.pi * scipy.fft.fftfreq(n, d=dx)
        shape = [1] * grid.dim
        shape[axis] = n
        k2 = k2 + (k**2).reshape(shape)
    return k2


def _warn_if_spreading_out(psi: WaveFunction, spec: EvolutionSpec) -> None:
    """Free flight: flag states whose 6-sigma envelope will reach the box edge."""
    if spec.potential.kind != "free":
        return
    mean_x, std_x = moments(density(psi))
    mean_k, std_k = moments(density_k(to_k_space(psi)))
    t = spec.horizon
    for axis, ax in enumerate(psi.grid.axes()):
        half = 0.5 * (ax[-1] - ax[0])
        centre = 0.5 * (ax[-1] + ax[0])
        reach = abs(mean_x[axis] + mean_k[axis] * t - centre) + 6.0 * math.hypot(std_x[axis], std_k[axis] * t)
        if reach > half:
            logger.warning("free evolution to t=%.3g may reach the box edge on axis %d (reach %.3g > %.3g)",
                           t, axis, reach, half)


def evolve(psi: WaveFunction, spec: EvolutionSpec) -> list[tuple[float, WaveFunction]]:
    require_normalized(psi)
    grid = psi.grid
    _warn_if_spreading_out(psi, spec)

    half_kick = np.exp(-0.5j * spec.dt * spec.potential.values(grid))
    drift = np.exp(-0.5j * spec.dt * _k_squared(grid))
    workers = config.fft_workers()

    logger.debug("evolve: %s potential, dt=%g, steps=%d, record_every=%d",
                 spec.potential.kind, spec.dt, spec.steps, spec.record_every)

    a = np.array(psi.amplitudes, dtype=np.complex128)
    t0 = psi.time_tag
    snapshots = [(t0, psi)]
    for step in range(1, spec.steps + 1):
        a = half_kick * a
        a = scipy.fft.ifftn(drift * scipy.fft.fftn(a, workers=workers), workers=workers)
        a = half_kick * a

        edge = edge_mass(a.real**2 + a.imag**2, grid)
        if not math.isfinite(edge):
            raise NonFinite(f"amplitudes became non-finite at step {step}")
        if edge > config.EDGE_MASS_ABORT:
            raise EdgeMassExceeded(
                f"EdgeMassExceeded: edge mass {edge:.3e} at t={t0 + step * spec.dt:.6g} "
                f"exceeds {config.EDGE_MASS_ABORT:.0e}; enlarge the box or shorten the horizon"
            )

        if step % spec.record_every == 0 or step == spec.steps:
            t = t0 + step * spec.dt
            snapshots.append((t, WaveFunction(grid=grid, amplitudes=a, time_tag=t)))

    return snapshots


def entropy_series(snapshots: list[tuple[float, WaveFunction]]) -> pd.DataFrame:
    if not snapshots:
        raise ValidationError("entropy_series needs at least one snapshot")

    rows = []
    for t, psi in snapshots:
        rep = continuous_entropy(psi)
        rows.append({
            "t": float(t),
            "s_r": rep.s_r,
            "s_k": rep.s_k,
            "s_total": rep.s_total,
            "bbm_margin": rep.bbm_margin,
            "norm_residual": max(rep.norm_residual_r, rep.norm_residual_k),
        })
    df = pd.DataFrame(rows, columns=SERIES_COLUMNS)

    if len(df) >= 2:
        steps = df["s_total"].diff().iloc[1:]
        df.attrs["n_decreasing"] = int((steps < -DECREASE_TOL).sum())
        df.attrs["max_decrease"] = float(max(0.0, -steps.min()))
    return df
