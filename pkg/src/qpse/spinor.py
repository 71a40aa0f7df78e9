"""
spinor.py

Dirac gamma-matrix algebra (standard representation) and the C, P, T and CPT
maps on 4-component fields over a 1D grid.

    C = i g2 g0,  P = g0,  T = i g1 g3        (metric +, -, -, -)

    Psi^C = C (g0)^T Psi*,  Psi^P(x) = g0 Psi(-x),  Psi^T = T Psi*  (t -> -t)

All maps are unitary pointwise (up to the index reversal of parity), so the
position and momentum densities, and hence S_r and S_k, are unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .entropy import LN_E_PI, EntropyReport, differential_entropy
from .errors import ValidationError
from .grid import DensityField, GridSpec, _readonly
from .spectral import forward_amplitudes, kgrid_for
from .spin import LN_2PI


@dataclass(frozen=True)
class SpinorField:
    grid: GridSpec
    components: np.ndarray
    time_tag: float = 0.0

    def __post_init__(self) -> None:
        if self.grid.dim != 1:
            raise ValidationError(f"spinor fields live on 1D grids (got dim={self.grid.dim})")
        c = np.array(self.components, dtype=np.complex128)
        if c.shape != (4, self.grid.points[0]):
            raise ValidationError(f"spinor components must have shape (4, {self.grid.points[0]}), got {c.shape}")
        object.__setattr__(self, "components", _readonly(c))
        object.__setattr__(self, "time_tag", float(self.time_tag))

    def mass(self) -> float:
        c = self.components
        return float(np.sum(c.real**2 + c.imag**2) * self.grid.cell_volume)


@dataclass(frozen=True)
class GammaSet:
    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    C: np.ndarray
    P: np.ndarray
    T: np.ndarray

    @property
    def gammas(self) -> tuple[np.ndarray, ...]:
        return (self.gamma0, self.gamma1, self.gamma2, self.gamma3)


PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@lru_cache(maxsize=1)
def gamma_set() -> GammaSet:
    i2 = np.eye(2, dtype=np.complex128)
    z2 = np.zeros((2, 2), dtype=np.complex128)
    g0 = np.block([[i2, z2], [z2, -i2]])
    g1, g2, g3 = (np.block([[z2, s], [-s, z2]]) for s in PAULI)
    mats = [_readonly(m) for m in (g0, g1, g2, g3)]
    C = _readonly(1j * g2 @ g0)
    T = _readonly(1j * g1 @ g3)
    return GammaSet(*mats, C=C, P=mats[0], T=T)


def check_gamma_algebra() -> dict[str, float]:
    """Max entrywise residual of every identity the CPT argument relies on."""
    g = gamma_set()
    eye = np.eye(4)
    res: dict[str, float] = {}

    res["clifford"] = max(
        float(np.max(np.abs(a @ b + b @ a - 2.0 * METRIC[mu, nu] * eye)))
        for mu, a in enumerate(g.gammas)
        for nu, b in enumerate(g.gammas)
    )
    res["gamma0_hermitian"] = float(np.max(np.abs(g.gamma0 - g.gamma0.conj().T)))
    res["gammai_antihermitian"] = max(float(np.max(np.abs(m + m.conj().T))) for m in g.gammas[1:])
    res["c_unitary"] = float(np.max(np.abs(g.C.conj().T @ g.C - eye)))
    res["t_unitary"] = float(np.max(np.abs(g.T.conj().T @ g.T - eye)))
    c_inv = g.C.conj().T
    res["charge_conjugation"] = max(float(np.max(np.abs(g.C @ m @ c_inv + m.T))) for m in g.gammas)
    return res


def _apply_matrix(m: np.ndarray, comps: np.ndarray) -> np.ndarray:
    return np.einsum("ab,bn->an", m, comps)


def reflect(values: np.ndarray) -> np.ndarray:
    """x -> -x on a centred grid: index n -> (-n mod N) along the last axis."""
    return np.roll(np.flip(values, axis=-1), 1, axis=-1)


def apply_c(field: SpinorField) -> SpinorField:
    g = gamma_set()
    out = _apply_matrix(g.C @ g.gamma0.T, field.components.conj())
    return SpinorField(grid=field.grid, components=out, time_tag=field.time_tag)


def apply_p(field: SpinorField) -> SpinorField:
    out = _apply_matrix(gamma_set().P, reflect(field.components))
    return SpinorField(grid=field.grid, components=out, time_tag=field.time_tag)


def apply_t(field: SpinorField) -> SpinorField:
    out = _apply_matrix(gamma_set().T, field.components.conj())
    return SpinorField(grid=field.grid, components=out, time_tag=-field.time_tag)


def apply_cpt(field: SpinorField) -> SpinorField:
    return apply_c(apply_p(apply_t(field)))


def spinor_density(field: SpinorField) -> DensityField:
    c = field.components
    return DensityField(grid=field.grid, values=np.sum(c.real**2 + c.imag**2, axis=0))


def spinor_k_density(field: SpinorField) -> DensityField:
    phi = np.stack([forward_amplitudes(c, field.grid) for c in field.components])
    return DensityField(grid=kgrid_for(field.grid), values=np.sum(phi.real**2 + phi.imag**2, axis=0))


def density_residual(before: SpinorField, after: SpinorField, reflected: bool = False) -> float:
    """
    Pointwise max |rho_after - rho_before|. With `reflected`, rho_after is
    compared at -x (parity and CPT move the density to the mirrored point).
    """
    rb = spinor_density(before).values
    ra = spinor_density(after).values
    if reflected:
        ra = reflect(ra)
    return float(np.max(np.abs(ra - rb)))


def spinor_entropy(field: SpinorField) -> EntropyReport:
    rho_r = spinor_density(field)
    rho_k = spinor_k_density(field)
    s_r = differential_entropy(rho_r)
    s_k = differential_entropy(rho_k)
    return EntropyReport(
        s_r=s_r,
        s_k=s_k,
        s_spin=LN_2PI,
        s_total=s_r + s_k + LN_2PI,
        norm_residual_r=abs(float(np.sum(rho_r.values) * rho_r.cell_volume) - 1.0),
        norm_residual_k=abs(float(np.sum(rho_k.values) * rho_k.cell_volume) - 1.0),
        bbm_margin=s_r + s_k - LN_E_PI,
        dim=1,
        points=field.grid.points,
        spacing=field.grid.spacing,
    )


def global_phase_overlap(a: SpinorField, b: SpinorField) -> float:
    """|<a|b>| summed over components; 1 when the fields agree up to a phase."""
    return float(abs(np.vdot(a.components.ravel(), b.components.ravel())) * a.grid.cell_volume)
