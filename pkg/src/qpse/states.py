"""
states.py

Parametric construction of test states.

Kinds
- gaussian: psi(x) = (2 pi s^2)^(-1/4) exp(-(x - x0)^2 / (4 s^2)) exp(i k0 x) per axis,
  so |psi|^2 has standard deviation s (s sigma_k = 1/2 for the coherent case)
- hermite: H_n((x - x0) / (sqrt(2) s)) exp(-(x - x0)^2 / (4 s^2)) per axis
- superposition: sum of coefficient * state, renormalized
- two_particle_gaussian: correlated pair on a 2D grid, covariance s^2 [[1, r], [r, 1]]
- spinor_packet: u(k0) g(x) exp(i k0 x), u the free Dirac spinor of the chosen branch

Every factory output is normalized and has decayed at the box edges
(GridTooSmall otherwise).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np
from scipy.special import eval_hermite

from .errors import AliasedMomentum, GridTooSmall, ValidationError
from .grid import GridSpec, WaveFunction, check_edges, edge_amplitude, normalize
from .spinor import PAULI, SpinorField


logger = logging.getLogger(__name__)


def _per_axis(value, dim: int, name: str) -> tuple[float, ...]:
    if np.ndim(value) == 0:
        return (float(value),) * dim
    out = tuple(float(v) for v in value)
    if len(out) != dim:
        raise ValidationError(f"{name} has {len(out)} entries; grid dim is {dim}")
    return out


@dataclass(frozen=True)
class GaussianSpec:
    kind: ClassVar[str] = "gaussian"
    sigma: float | tuple[float, ...] = 1.0
    center: float | tuple[float, ...] = 0.0
    k0: float | tuple[float, ...] = 0.0


@dataclass(frozen=True)
class HermiteSpec:
    kind: ClassVar[str] = "hermite"
    index: int | tuple[int, ...] = 0
    sigma: float = 1.0
    center: float | tuple[float, ...] = 0.0


@dataclass(frozen=True)
class SuperpositionSpec:
    kind: ClassVar[str] = "superposition"
    terms: tuple[tuple[complex, "StateSpec"], ...] = ()


@dataclass(frozen=True)
class TwoParticleGaussianSpec:
    kind: ClassVar[str] = "two_particle_gaussian"
    sigma: float = 1.0
    correlation: float = 0.0


@dataclass(frozen=True)
class SpinorPacketSpec:
    kind: ClassVar[str] = "spinor_packet"
    center: float = 0.0
    sigma: float = 1.0
    k0: float = 0.0
    branch: str = "positive"
    spin_up: complex = 1.0
    spin_down: complex = 0.0
    mass: float = 1.0


StateSpec = Union[GaussianSpec, HermiteSpec, SuperpositionSpec, TwoParticleGaussianSpec, SpinorPacketSpec]


def _check_sigma(sigmas) -> None:
    for s in np.atleast_1d(sigmas):
        if not s > 0:
            raise ValidationError(f"sigma must be > 0 (got {s})")


def _finish(amplitudes: np.ndarray, grid: GridSpec) -> WaveFunction:
    psi = normalize(WaveFunction(grid=grid, amplitudes=amplitudes))
    check_edges(psi)
    return psi


def gaussian_axis(x: np.ndarray, sigma: float, center: float = 0.0, k0: float = 0.0) -> np.ndarray:
    u = x - center
    return (2.0 * math.pi * sigma**2) ** -0.25 * np.exp(-(u**2) / (4.0 * sigma**2)) * np.exp(1j * k0 * x)


def hermite_axis(x: np.ndarray, n: int, sigma: float, center: float = 0.0) -> np.ndarray:
    u = (x - center) / (math.sqrt(2.0) * sigma)
    return eval_hermite(n, u) * np.exp(-(u**2) / 2.0)


def _gaussian(spec: GaussianSpec, grid: GridSpec) -> np.ndarray:
    sig = _per_axis(spec.sigma, grid.dim, "sigma")
    cen = _per_axis(spec.center, grid.dim, "center")
    k0 = _per_axis(spec.k0, grid.dim, "k0")
    _check_sigma(sig)
    parts = [gaussian_axis(x, s, c, k) for x, s, c, k in zip(grid.axes(), sig, cen, k0)]
    return _outer(parts)


def _hermite(spec: HermiteSpec, grid: GridSpec) -> np.ndarray:
    idx = spec.index if np.ndim(spec.index) else (spec.index,) * grid.dim
    idx = tuple(int(i) for i in idx)
    if len(idx) != grid.dim or any(i < 0 for i in idx):
        raise ValidationError(f"hermite index must be {grid.dim} nonnegative integers (got {spec.index})")
    _check_sigma(spec.sigma)
    cen = _per_axis(spec.center, grid.dim, "center")
    parts = [hermite_axis(x, n, spec.sigma, c) for x, n, c in zip(grid.axes(), idx, cen)]
    return _outer(parts).astype(np.complex128)


def _outer(parts: list[np.ndarray]) -> np.ndarray:
    out = parts[0]
    for p in parts[1:]:
        out = np.multiply.outer(out, p)
    return out


def make_state(spec: StateSpec, grid: GridSpec) -> WaveFunction:
    if isinstance(spec, GaussianSpec):
        return _finish(_gaussian(spec, grid), grid)
    if isinstance(spec, HermiteSpec):
        return _finish(_hermite(spec, grid), grid)
    if isinstance(spec, SuperpositionSpec):
        if not spec.terms:
            raise ValidationError("superposition needs at least one term")
        total = np.zeros(grid.shape, dtype=np.complex128)
        for coef, sub in spec.terms:
            if isinstance(sub, (TwoParticleGaussianSpec, SpinorPacketSpec)):
                raise ValidationError(f"{sub.kind} cannot appear inside a superposition")
            total = total + complex(coef) * make_state(sub, grid).amplitudes
        return _finish(total, grid)
    if isinstance(spec, TwoParticleGaussianSpec):
        return make_two_particle(spec, grid)
    if isinstance(spec, SpinorPacketSpec):
        raise ValidationError("spinor_packet builds a SpinorField; use make_spinor_packet")
    raise ValidationError(f"unknown state spec {spec!r}")


def make_two_particle(spec: TwoParticleGaussianSpec, grid2d: GridSpec) -> WaveFunction:
    if grid2d.dim != 2:
        raise ValidationError(f"two-particle states need a 2D grid (got dim={grid2d.dim})")
    r = float(spec.correlation)
    if not abs(r) < 1.0:
        raise ValidationError(f"correlation must satisfy |r| < 1 (got {r})")
    _check_sigma(spec.sigma)

    # narrowest principal width of the covariance sigma^2 [[1, r], [r, 1]]
    narrow = spec.sigma * math.sqrt(1.0 - abs(r))
    if narrow < 2.0 * max(grid2d.spacing):
        raise GridTooSmall(
            f"GridTooSmall: correlation {r} leaves a principal width {narrow:.3e} "
            f"below 2 grid steps ({2.0 * max(grid2d.spacing):.3e}); covariance is near-singular"
        )

    x1, x2 = grid2d.mesh()
    q = (x1**2 + x2**2 - 2.0 * r * x1 * x2) / (4.0 * spec.sigma**2 * (1.0 - r**2))
    return _finish(np.exp(-q).astype(np.complex128), grid2d)


def random_superposition(
    rng: np.random.Generator,
    grid: GridSpec,
    n_terms: int = 5,
    max_index: int = 9,
    sigma: float = 1.0,
) -> tuple[SuperpositionSpec, WaveFunction]:
    """Random 1D Hermite superposition with complex normal coefficients."""
    if grid.dim != 1:
        raise ValidationError("random superpositions are built on 1D grids")
    if n_terms > max_index + 1:
        raise ValidationError("n_terms exceeds the number of available Hermite indices")
    idx = rng.choice(max_index + 1, size=n_terms, replace=False)
    coefs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    logger.debug("random superposition: hermite indices %s", idx.tolist())
    spec = SuperpositionSpec(
        terms=tuple((complex(c), HermiteSpec(index=int(n), sigma=sigma)) for c, n in zip(coefs, idx))
    )
    return spec, make_state(spec, grid)


# -----------------------------
# Dirac spinor packets
# -----------------------------

def dirac_spinor(k: float, mass: float, branch: str, chi: np.ndarray) -> np.ndarray:
    """
    Unit free-particle spinor for momentum k along x (standard representation).

    positive: (chi, sigma_x k chi / (E + m)),  negative: (-sigma_x k chi / (E + m), chi)
    """
    energy = math.sqrt(k**2 + mass**2)
    lower = PAULI[0] @ chi * (k / (energy + mass))
    if branch == "positive":
        u = np.concatenate([chi, lower])
    elif branch == "negative":
        u = np.concatenate([-lower, chi])
    else:
        raise ValidationError(f"energy branch must be 'positive' or 'negative' (got {branch!r})")
    return u / np.linalg.norm(u)


def make_spinor_packet(spec: SpinorPacketSpec, grid: GridSpec) -> SpinorField:
    if grid.dim != 1:
        raise ValidationError("spinor packets are built on 1D grids")
    if not spec.mass > 0:
        raise ValidationError(f"mass must be > 0 (got {spec.mass})")
    _check_sigma(spec.sigma)

    nyquist = math.pi / grid.spacing[0]
    if abs(spec.k0) >= 0.5 * nyquist:
        raise AliasedMomentum(
            f"AliasedMomentum: |k0| = {abs(spec.k0):.4g} is not below half the Nyquist frequency {nyquist:.4g}"
        )

    chi = np.array([spec.spin_up, spec.spin_down], dtype=np.complex128)
    chi_norm = np.linalg.norm(chi)
    if chi_norm == 0:
        raise ValidationError("spin weights must not both be zero")
    u = dirac_spinor(spec.k0, spec.mass, spec.branch, chi / chi_norm)

    envelope = gaussian_axis(grid.axes()[0], spec.sigma, spec.center, spec.k0)
    envelope = envelope / math.sqrt(float(np.sum(np.abs(envelope) ** 2)) * grid.cell_volume)
    if edge_amplitude(envelope) > 1e-12:
        raise GridTooSmall("GridTooSmall: packet envelope has not decayed at the box edges")

    return SpinorField(grid=grid, components=np.outer(u, envelope))


def random_spinor_field(rng: np.random.Generator, grid: GridSpec, packets: int = 3) -> SpinorField:
    """
    Arbitrary normalized 4-component field: each component a random sum of
    Gaussian packets with random centres, widths, boosts and complex weights.
    """
    if grid.dim != 1:
        raise ValidationError("spinor fields live on 1D grids")
    x = grid.axes()[0]
    comps = np.zeros((4, x.size), dtype=np.complex128)
    for a in range(4):
        for _ in range(packets):
            w = rng.normal() + 1j * rng.normal()
            comps[a] += w * gaussian_axis(
                x,
                sigma=rng.uniform(0.5, 1.5),
                center=rng.uniform(-3.0, 3.0),
                k0=rng.uniform(-3.0, 3.0),
            )
    norm = math.sqrt(float(np.sum(np.abs(comps) ** 2)) * grid.cell_volume)
    return SpinorField(grid=grid, components=comps / norm)
