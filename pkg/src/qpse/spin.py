"""
spin.py

Spin-entropy for s = 0 and s = 1/2, the entangled two-fermion spin entropy,
and composition of spin into a total state entropy.

Notes
- A definite-spin state has a uniform azimuthal density 1/(2 pi) on [0, 2 pi),
  so its spin-entropy is 2s ln(2 pi).
- The azimuthal eigenfunctions are exp(i (s + m) phi) / sqrt(2 pi) for
  m = -s, ..., s (northern-hemisphere gauge).
- Massive spin 1 is unsupported. The massless spin-1 constant equals the
  spin-1/2 value and is exposed as MASSLESS_SPIN1_ENTROPY.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import xlogy

from . import config
from .entropy import EntropyReport
from .errors import NotNormalized, UnsupportedSpin, ValidationError


LN_2PI = math.log(2.0 * math.pi)
MASSLESS_SPIN1_ENTROPY = LN_2PI
COLLAPSE_REMAINDER = LN_2PI

SUPPORTED_SPINS = (Fraction(0), Fraction(1, 2))
MODES = ("single", "entangled_pair")


def as_spin(s) -> Fraction:
    try:
        value = Fraction(s) if not isinstance(s, float) else Fraction(s).limit_denominator(1000)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise UnsupportedSpin(f"cannot read spin value {s!r}") from e
    if value not in SUPPORTED_SPINS:
        raise UnsupportedSpin(f"spin {value} is not supported (only 0 and 1/2)")
    return value


def reduce_theta(theta: float) -> float:
    """Map theta into [0, pi/2] using the symmetries of cos^2 and sin^2."""
    t = math.fmod(abs(float(theta)), math.pi)
    return math.pi - t if t > math.pi / 2 else t


@dataclass(frozen=True)
class SpinSpec:
    s: Fraction = Fraction(1, 2)
    mode: str = "single"
    theta_alpha: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", as_spin(self.s))
        if self.mode not in MODES:
            raise ValidationError(f"spin mode must be one of {MODES} (got {self.mode!r})")
        if self.mode == "entangled_pair":
            if self.s != Fraction(1, 2):
                raise UnsupportedSpin("entangled pairs are defined for s = 1/2 only")
            if self.theta_alpha is None or not math.isfinite(self.theta_alpha):
                raise ValidationError("entangled_pair needs a finite theta_alpha")
            object.__setattr__(self, "theta_alpha", reduce_theta(self.theta_alpha))
        elif self.theta_alpha is not None:
            raise ValidationError("theta_alpha is only meaningful for entangled_pair")


def spin_entropy_single(s) -> float:
    return float(2 * as_spin(s)) * LN_2PI


def spin_entropy_entangled_pair(theta_alpha: float) -> float:
    if not math.isfinite(theta_alpha):
        raise ValidationError("theta_alpha must be finite")
    c2 = math.cos(theta_alpha) ** 2
    s2 = math.sin(theta_alpha) ** 2
    return 2.0 * LN_2PI - float(xlogy(c2, c2) + xlogy(s2, s2))


def azimuthal_density(alphas: np.ndarray, points: int = config.PHI_POINTS) -> tuple[np.ndarray, np.ndarray]:
    """rho(phi) = |sum_m alpha_m exp(i (s + m) phi)|^2 / (2 pi) on a uniform phi-grid."""
    a = np.asarray(alphas, dtype=np.complex128).ravel()
    norm = float(np.sum(np.abs(a) ** 2))
    if abs(norm - 1.0) > config.NORM_TOL:
        raise NotNormalized(f"spin coefficients have sum |alpha|^2 = {norm:.12f}")
    phi = 2.0 * math.pi * np.arange(points) / points
    # index j <-> m = -s + j, so s + m = j
    modes = np.exp(1j * np.outer(phi, np.arange(a.size)))
    amp = modes @ a
    return phi, (amp.real**2 + amp.imag**2) / (2.0 * math.pi)


def azimuthal_density_entropy(alphas: np.ndarray, points: int = config.PHI_POINTS) -> float:
    a = np.asarray(alphas).ravel()
    if a.size != 2:
        raise UnsupportedSpin(f"azimuthal entropy is defined for s = 1/2 (2 coefficients, got {a.size})")
    _, rho = azimuthal_density(a, points)
    dphi = 2.0 * math.pi / points
    terms = np.where(rho > config.RHO_FLOOR, -xlogy(rho, rho), 0.0)
    return float(np.sum(terms) * dphi)


def spin_entropy(spec: SpinSpec) -> float:
    if spec.mode == "entangled_pair":
        return spin_entropy_entangled_pair(spec.theta_alpha)
    return spin_entropy_single(spec.s)


def compose_total(report: EntropyReport, spec: SpinSpec) -> EntropyReport:
    """Attach the spin-entropy of `spec`; S_r and S_k are left untouched."""
    if spec.mode == "entangled_pair" and report.dim != 2:
        raise ValidationError("entangled_pair spin needs a two-particle (2D) continuous report")
    return report.with_spin(spin_entropy(spec))
