import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpse.entropy import continuous_entropy
from qpse.errors import NotNormalized, UnsupportedSpin, ValidationError
from qpse.spin import (
    COLLAPSE_REMAINDER,
    LN_2PI,
    MASSLESS_SPIN1_ENTROPY,
    SpinSpec,
    azimuthal_density,
    azimuthal_density_entropy,
    compose_total,
    reduce_theta,
    spin_entropy,
    spin_entropy_entangled_pair,
    spin_entropy_single,
)


def test_single_spin_constants():
    assert spin_entropy_single(0) == 0.0
    assert abs(spin_entropy_single(Fraction(1, 2)) - LN_2PI) < 1e-12
    assert abs(spin_entropy_single(0.5) - LN_2PI) < 1e-12
    assert MASSLESS_SPIN1_ENTROPY == LN_2PI
    assert COLLAPSE_REMAINDER == LN_2PI


@pytest.mark.parametrize("s", [1, Fraction(3, 2), "abc", -0.5])
def test_unsupported_spins(s):
    with pytest.raises(UnsupportedSpin):
        spin_entropy_single(s)


@pytest.mark.parametrize(
    "theta, expected",
    [
        (0.0, 2 * LN_2PI),
        (math.pi / 4, 2 * LN_2PI + math.log(2)),
        (math.pi / 2, 2 * LN_2PI),
    ],
)
def test_entangled_pair_values(theta, expected):
    assert spin_entropy_entangled_pair(theta) == pytest.approx(expected, abs=1e-9)


def test_entangled_pair_quarter_turn_value():
    assert spin_entropy_entangled_pair(0.7853981634) == pytest.approx(4.3689013, abs=1e-6)


def test_entangled_pair_mirror_symmetry():
    for theta in np.linspace(0.0, math.pi / 2, 100):
        assert abs(spin_entropy_entangled_pair(theta) - spin_entropy_entangled_pair(math.pi / 2 - theta)) < 1e-12


@settings(max_examples=100)
@given(st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
def test_entangled_pair_range(theta):
    s = spin_entropy_entangled_pair(theta)
    assert 2 * LN_2PI - 1e-12 <= s <= 2 * LN_2PI + math.log(2) + 1e-12


def test_azimuthal_entropy_at_basis_spinors():
    for alpha in ([1.0, 0.0], [0.0, 1.0], [0.0, 1j]):
        assert azimuthal_density_entropy(np.array(alpha)) == pytest.approx(LN_2PI, abs=1e-9)


def test_azimuthal_entropy_equal_weights():
    alpha = np.array([1.0, 1.0]) / math.sqrt(2)
    assert azimuthal_density_entropy(alpha) == pytest.approx(LN_2PI - 1 + math.log(2), abs=1e-6)


def test_azimuthal_density_integrates_to_one():
    alpha = np.array([0.6, 0.8j])
    phi, rho = azimuthal_density(alpha)
    assert np.sum(rho) * (2 * math.pi / phi.size) == pytest.approx(1.0, abs=1e-12)


def test_azimuthal_entropy_never_exceeds_uniform():
    r = np.random.default_rng(11)
    values = []
    for _ in range(500):
        a = r.normal(size=2) + 1j * r.normal(size=2)
        values.append(azimuthal_density_entropy(a / np.linalg.norm(a)))
    assert max(values) <= LN_2PI + 1e-10


def test_azimuthal_input_checks():
    with pytest.raises(NotNormalized):
        azimuthal_density_entropy(np.array([1.0, 1.0]))
    with pytest.raises(UnsupportedSpin):
        azimuthal_density_entropy(np.array([1.0, 0.0, 0.0]))


def test_reduce_theta():
    assert reduce_theta(math.pi - 0.3) == pytest.approx(0.3)
    assert reduce_theta(-0.3) == pytest.approx(0.3)
    assert reduce_theta(3 * math.pi / 4) == pytest.approx(math.pi / 4)
    assert 0.0 <= reduce_theta(123.4) <= math.pi / 2


def test_spin_spec_validation():
    with pytest.raises(ValidationError):
        SpinSpec(mode="entangled_pair")
    with pytest.raises(ValidationError):
        SpinSpec(mode="single", theta_alpha=0.2)
    with pytest.raises(ValidationError):
        SpinSpec(mode="triplet")
    with pytest.raises(UnsupportedSpin):
        SpinSpec(s=0, mode="entangled_pair", theta_alpha=0.1)
    assert SpinSpec(mode="entangled_pair", theta_alpha=math.pi).theta_alpha == pytest.approx(0.0)


def test_spin_entropy_dispatch():
    assert spin_entropy(SpinSpec(s=0)) == 0.0
    assert spin_entropy(SpinSpec(mode="entangled_pair", theta_alpha=math.pi / 4)) == pytest.approx(
        2 * LN_2PI + math.log(2), abs=1e-12
    )


def test_compose_total(gaussian_1d):
    rep = continuous_entropy(gaussian_1d)
    total = compose_total(rep, SpinSpec())
    assert total.s_spin == pytest.approx(LN_2PI)
    assert total.s_total == pytest.approx(rep.s_r + rep.s_k + LN_2PI)
    with pytest.raises(ValidationError):
        compose_total(rep, SpinSpec(mode="entangled_pair", theta_alpha=0.3))
