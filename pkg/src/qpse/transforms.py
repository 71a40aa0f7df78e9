"""
transforms.py

Continuous transformations of a state and the entropy deltas they produce.

Kinds
- translate_x: psi(x) -> psi(x - x0); whole grid steps are an exact array
  rotation, fractional steps use the k-space phase exp(-i k x0)
- translate_k: psi(x) -> psi(x) exp(i k0 x) (momentum boost)
- dilate: x -> a x with amplitudes scaled by a^(-dim/2); moves the grid, no
  interpolation. S_r gains dim ln a and S_k loses dim ln a.
- parity: x -> -x about the grid centre (0 on centred grids)
- conjugate: psi -> psi*
- lorentz_boost_k: momentum-measure check at fixed time, 1D only

Notes
- General nonlinear point transformations are not built; dilation is the
  linear subgroup where the Jacobians of the two marginals cancel exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config
from .entropy import EntropyReport
from .errors import AliasedMomentum, NonFinite, ValidationError
from .grid import GridSpec, WaveFunction, require_normalized
from .spectral import (
    KAmplitude,
    density_k,
    evaluate_k,
    from_k_space,
    inverse_amplitudes,
    to_k_space,
)


KINDS = ("translate_x", "translate_k", "dilate", "parity", "conjugate", "lorentz_boost_k")
STATE_KINDS = KINDS[:-1]


@dataclass(frozen=True)
class TransformSpec:
    kind: str
    amount: float = 0.0
    mass: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown transform kind {self.kind!r}; expected one of {KINDS}")
        if not math.isfinite(self.amount):
            raise ValidationError(f"transform amount must be finite (got {self.amount})")
        if self.kind == "dilate" and not self.amount > 0:
            raise ValidationError(f"dilation factor must be > 0 (got {self.amount})")
        if self.kind == "lorentz_boost_k":
            if self.mass is None or not self.mass > 0:
                raise ValidationError(f"lorentz_boost_k needs mass > 0 (got {self.mass})")
        elif self.mass is not None:
            raise ValidationError(f"mass is only used by lorentz_boost_k (kind {self.kind!r})")


@dataclass(frozen=True)
class EntropyDelta:
    d_s_r: float
    d_s_k: float
    d_s_total: float


def entropy_delta(before: EntropyReport, after: EntropyReport) -> EntropyDelta:
    return EntropyDelta(
        d_s_r=after.s_r - before.s_r,
        d_s_k=after.s_k - before.s_k,
        d_s_total=after.s_total - before.s_total,
    )


# -----------------------------
# Translations
# -----------------------------

def _k_phase(kgrid: GridSpec, shifts: tuple[float, ...]) -> np.ndarray:
    phase = np.ones(kgrid.shape, dtype=np.complex128)
    for axis, (k, x0) in enumerate(zip(kgrid.axes(), shifts)):
        shape = [1] * kgrid.dim
        shape[axis] = k.size
        phase = phase * np.exp(-1j * k * x0).reshape(shape)
    return phase


def _per_axis(amount, dim: int) -> tuple[float, ...]:
    if np.ndim(amount) == 0:
        return (float(amount),) * dim
    out = tuple(float(a) for a in amount)
    if len(out) != dim:
        raise ValidationError(f"translation has {len(out)} components; grid dim is {dim}")
    return out


def check_aliasing(phi: KAmplitude) -> None:
    """AliasedMomentum when k-mass sits within 10% of the Nyquist edge on any axis."""
    rho = density_k(phi).values
    for axis, k in enumerate(phi.kgrid.axes()):
        kmax = (phi.kgrid.points[axis] // 2) * phi.kgrid.spacing[axis]
        band = np.abs(k) >= 0.9 * kmax
        shape = [1] * phi.kgrid.dim
        shape[axis] = k.size
        mass = float(np.sum(rho * band.reshape(shape)) * phi.kgrid.cell_volume)
        if mass > config.ALIAS_MASS_TOL:
            raise AliasedMomentum(
                f"AliasedMomentum: k-mass {mass:.3e} within 10% of the Nyquist edge on axis {axis}"
            )


def translate(psi: WaveFunction, kind: str, amount) -> WaveFunction:
    require_normalized(psi)
    shifts = _per_axis(amount, psi.grid.dim)

    if kind == "translate_x":
        steps = [s / dx for s, dx in zip(shifts, psi.grid.spacing)]
        if all(abs(n - round(n)) < 1e-9 for n in steps):
            rolled = np.roll(psi.amplitudes, tuple(int(round(n)) for n in steps), axis=tuple(range(psi.grid.dim)))
            return psi.replace(amplitudes=rolled)
        phi = to_k_space(psi)
        moved = KAmplitude(
            kgrid=phi.kgrid,
            amplitudes=phi.amplitudes * _k_phase(phi.kgrid, shifts),
            xgrid=phi.xgrid,
            time_tag=phi.time_tag,
        )
        return from_k_space(moved)

    if kind == "translate_k":
        phase = np.ones(psi.grid.shape, dtype=np.complex128)
        for axis, (x, k0) in enumerate(zip(psi.grid.axes(), shifts)):
            shape = [1] * psi.grid.dim
            shape[axis] = x.size
            phase = phase * np.exp(1j * k0 * x).reshape(shape)
        out = psi.replace(amplitudes=psi.amplitudes * phase)
        check_aliasing(to_k_space(out))
        return out

    raise ValidationError(f"translate expects translate_x or translate_k (got {kind!r})")


# -----------------------------
# Point transformations and discrete maps
# -----------------------------

def dilate(psi: WaveFunction, a: float) -> WaveFunction:
    if not a > 0:
        raise ValidationError(f"dilation factor must be > 0 (got {a})")
    g = psi.grid
    grid = GridSpec(
        dim=g.dim,
        points=g.points,
        origin=tuple(a * x0 for x0 in g.origin),
        spacing=tuple(a * dx for dx in g.spacing),
    )
    return psi.replace(grid=grid, amplitudes=psi.amplitudes * a ** (-g.dim / 2.0))


def parity(psi: WaveFunction) -> WaveFunction:
    """x -> -x about the grid centre: index n -> (-n mod N) on every axis."""
    a = psi.amplitudes
    for axis in range(a.ndim):
        a = np.roll(np.flip(a, axis=axis), 1, axis=axis)
    return psi.replace(amplitudes=a)


def conjugate(psi: WaveFunction) -> WaveFunction:
    return psi.replace(amplitudes=psi.amplitudes.conj())


def apply_transform(psi: WaveFunction, spec: TransformSpec) -> WaveFunction:
    if spec.kind in ("translate_x", "translate_k"):
        return translate(psi, spec.kind, spec.amount)
    if spec.kind == "dilate":
        return dilate(psi, spec.amount)
    if spec.kind == "parity":
        return parity(psi)
    if spec.kind == "conjugate":
        return conjugate(psi)
    raise ValidationError(f"{spec.kind} does not map states to states; use lorentz_measure_check")


# -----------------------------
# Lorentz momentum measure
# -----------------------------

def _omega(k: np.ndarray, mass: float) -> np.ndarray:
    return np.sqrt(k**2 + mass**2)


def _boost_inputs(phi: KAmplitude, rapidity: float, mass: float) -> None:
    if phi.kgrid.dim != 1:
        raise ValidationError("the Lorentz measure check works on 1D k-amplitudes")
    if not mass > 0:
        raise ValidationError(f"mass must be > 0 (got {mass})")
    if not math.isfinite(rapidity):
        raise NonFinite(f"rapidity must be finite (got {rapidity})")
    if not np.all(np.isfinite(phi.amplitudes)):
        raise NonFinite("k-amplitudes contain NaN or inf")


def boost_k_amplitude(phi: KAmplitude, rapidity: float, mass: float,
                      refine: int = 4) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Boosted amplitude phi'(k') = sqrt(w_k / w_k') phi(k) with k' = k cosh(eta) - w_k sinh(eta).

    Returns (k' nodes, phi' values, dk') on a uniform k'-grid `refine` times
    finer than the source grid over the same band. phi is evaluated at the
    pre-image k(k') = k' cosh(eta) + w_k' sinh(eta) by band-limited
    interpolation; pre-images outside the source band carry zero amplitude.
    """
    _boost_inputs(phi, rapidity, mass)
    k = phi.kgrid.axes()[0]
    dkp = phi.kgrid.spacing[0] / refine
    kp = k[0] + dkp * np.arange(refine * k.size)

    wp = _omega(kp, mass)
    k_src = kp * math.cosh(rapidity) + wp * math.sinh(rapidity)
    w_src = _omega(k_src, mass)

    source = WaveFunction(grid=phi.xgrid, amplitudes=inverse_amplitudes(phi.amplitudes, phi.kgrid, phi.xgrid))
    inside = (k_src >= k[0]) & (k_src <= k[-1])
    values = np.zeros(kp.size, dtype=np.complex128)
    values[inside] = np.sqrt(w_src[inside] / wp[inside]) * evaluate_k(source, k_src[inside])
    return kp, values, dkp


def lorentz_measure_check(phi: KAmplitude, rapidity: float, mass: float) -> float:
    """
    |I - I'| for the invariant measure dk / w_k.

    I  = integral |phi(k)|^2 dk / w_k on the source grid,
    I' = integral |phi(k(k'))|^2 dk' / w_k' on a fresh uniform k'-grid,
    where |phi(k(k'))|^2 = (w_k' / w_k) |phi'(k')|^2 is the density carried
    to the boosted frame as a scalar.
    """
    _boost_inputs(phi, rapidity, mass)
    if rapidity == 0.0:
        return 0.0

    k = phi.kgrid.axes()[0]
    rho = np.abs(phi.amplitudes) ** 2
    i_src = float(np.sum(rho / _omega(k, mass)) * phi.kgrid.spacing[0])

    kp, values, dkp = boost_k_amplitude(phi, rapidity, mass)
    wp = _omega(kp, mass)
    w_src = _omega(kp * math.cosh(rapidity) + wp * math.sinh(rapidity), mass)
    carried = np.abs(values) ** 2 * (wp / w_src)
    i_boost = float(np.sum(carried / wp) * dkp)
    return abs(i_src - i_boost)


def boosted_probability(phi: KAmplitude, rapidity: float, mass: float) -> float:
    """Total probability integral |phi'(k')|^2 dk' after the sqrt(w/w') scaling."""
    _, values, dkp = boost_k_amplitude(phi, rapidity, mass)
    return float(np.sum(np.abs(values) ** 2) * dkp)
