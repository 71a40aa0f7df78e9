import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import digamma

from qpse import config
from qpse.entropy import (
    LN_E_PI,
    bbm_check,
    continuous_entropy,
    differential_entropy,
    gaussian_entropy_closed_form,
    joint_entropy_two_particle,
    to_bits,
)
from qpse.errors import NotNormalized, ValidationError
from qpse.grid import DensityField, GridSpec
from qpse.states import GaussianSpec, HermiteSpec, TwoParticleGaussianSpec, make_state, random_superposition


@pytest.mark.parametrize("sigma", [0.1, 0.5, 1.0, 5.0])
def test_gaussian_saturates_bound(sigma):
    grid = GridSpec.centered(1, 1024, 40.0 * sigma)
    rep = continuous_entropy(make_state(GaussianSpec(sigma=sigma), grid))
    assert abs(rep.bbm_margin) < 1e-5
    assert rep.s_r == pytest.approx(0.5 * math.log(2 * math.pi * math.e * sigma**2), abs=1e-8)
    assert rep.s_total == pytest.approx(LN_E_PI, abs=1e-6)
    assert rep.norm_residual_r < 1e-10
    assert rep.norm_residual_k < 1e-10


def test_coherent_state_with_momentum_is_still_minimal(grid_1d):
    rep = continuous_entropy(make_state(GaussianSpec(sigma=1.0, center=-1.0, k0=3.0), grid_1d))
    assert rep.s_total == pytest.approx(1 + math.log(math.pi), abs=1e-6)


def test_three_dimensional_gaussian():
    grid = GridSpec.centered(3, 64, 32.0)
    rep = continuous_entropy(make_state(GaussianSpec(sigma=1.0), grid), seed=42)
    assert rep.s_total == pytest.approx(3 * LN_E_PI, abs=1e-6)
    assert bbm_check(rep, 3) == pytest.approx(rep.bbm_margin)
    assert rep.dim == 3 and rep.points == (64, 64, 64) and rep.seed == 42


def test_three_by_one_dimensional_composition(gaussian_1d):
    one = continuous_entropy(gaussian_1d)
    assert 3 * one.s_total == pytest.approx(3 * LN_E_PI, abs=1e-6)
    assert 3 * LN_E_PI == pytest.approx(6.4341897, abs=1e-7)


def test_hermite_first_excited_state():
    grid = GridSpec.centered(1, 16384, 400.0)
    rep = continuous_entropy(make_state(HermiteSpec(index=1), grid))
    expected = math.log(math.pi) + 3 - 2 * math.log(2) - 2 * digamma(1.5)
    assert rep.s_total == pytest.approx(expected, abs=1e-4)
    assert rep.bbm_margin > 0.5


def test_product_state_is_additive():
    grid = GridSpec.centered(2, 256, 40.0)
    rep = joint_entropy_two_particle(make_state(TwoParticleGaussianSpec(sigma=1.0, correlation=0.0), grid))
    assert rep.s_total == pytest.approx(2 * LN_E_PI, abs=1e-8)
    assert rep.mutual_information_r == pytest.approx(0.0, abs=1e-8)
    assert rep.marginal_s_r[0] == pytest.approx(rep.marginal_s_r[1], abs=1e-10)


def test_correlated_pair_matches_closed_form():
    r = 0.8
    grid = GridSpec.centered(2, 256, 40.0)
    rep = joint_entropy_two_particle(make_state(TwoParticleGaussianSpec(sigma=1.0, correlation=r), grid))
    cov = np.array([[1.0, r], [r, 1.0]])
    assert rep.s_r == pytest.approx(0.5 * math.log((2 * math.pi * math.e) ** 2 * np.linalg.det(cov)), abs=1e-5)
    assert rep.s_r == pytest.approx(gaussian_entropy_closed_form(cov), abs=1e-5)
    assert rep.s_r + rep.s_k == pytest.approx(2 * LN_E_PI, abs=1e-6)
    assert rep.mutual_information_r == pytest.approx(-0.5 * math.log(1 - r**2), abs=1e-5)
    assert sum(rep.marginal_s_r) > rep.s_r


def test_joint_entropy_needs_two_axes(gaussian_1d):
    with pytest.raises(ValidationError):
        joint_entropy_two_particle(gaussian_1d)


def test_differential_entropy_requires_unit_mass(grid_1d):
    with pytest.raises(NotNormalized):
        differential_entropy(DensityField(grid=grid_1d, values=np.full(1024, 1.0)))


def test_empty_cells_contribute_nothing(grid_1d):
    values = np.zeros(1024)
    values[256:768] = 1.0 / 20.0
    s = differential_entropy(DensityField(grid=grid_1d, values=values))
    assert s == pytest.approx(math.log(20.0), abs=1e-12)


def test_closed_form_rejects_singular_covariance():
    with pytest.raises(ValidationError):
        gaussian_entropy_closed_form(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_report_helpers(gaussian_1d):
    rep = continuous_entropy(gaussian_1d)
    spun = rep.with_spin(math.log(2 * math.pi))
    assert spun.s_r == rep.s_r and spun.s_k == rep.s_k
    assert spun.s_total == pytest.approx(rep.s_total + math.log(2 * math.pi))
    d = spun.to_dict()
    assert d["points"] == [1024]
    assert set(d) >= {"s_r", "s_k", "s_spin", "s_total", "bbm_margin", "seed"}
    assert to_bits(math.log(2.0)) == pytest.approx(1.0)


def test_refinement_keeps_margin_within_quadrature_tolerance():
    rng = np.random.default_rng(3)
    spec, _ = random_superposition(rng, GridSpec.centered(1, 256, 40.0))
    margins = [continuous_entropy(make_state(spec, GridSpec.centered(1, n, 40.0))).bbm_margin
               for n in (256, 512, 1024, 2048)]
    assert all(b >= a - config.REFINEMENT_TOL for a, b in zip(margins, margins[1:]))
    assert min(margins) > 0


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_superpositions_respect_bound(seed):
    grid = GridSpec.centered(1, 1024, 40.0)
    _, psi = random_superposition(np.random.default_rng(seed), grid)
    assert continuous_entropy(psi).bbm_margin >= -1e-6


@pytest.mark.parametrize(
    "spec",
    [
        GaussianSpec(sigma=(0.8, 1.3), center=(1.0, -2.0), k0=(0.5, 0.0)),
        TwoParticleGaussianSpec(sigma=1.0, correlation=0.8),
    ],
)
def test_exchanging_the_particles_leaves_the_report_unchanged(spec):
    grid = GridSpec.centered(2, 256, 40.0)
    psi = make_state(spec, grid)
    a = joint_entropy_two_particle(psi)
    b = joint_entropy_two_particle(psi.replace(amplitudes=psi.amplitudes.T))
    assert b.s_r == pytest.approx(a.s_r, abs=1e-12)
    assert b.s_k == pytest.approx(a.s_k, abs=1e-12)
    assert b.mutual_information_r == pytest.approx(a.mutual_information_r, abs=1e-12)
    assert b.marginal_s_r == pytest.approx(a.marginal_s_r[::-1], abs=1e-12)
