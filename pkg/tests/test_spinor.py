import math

import numpy as np
import pytest

from qpse.entropy import LN_E_PI
from qpse.errors import ValidationError
from qpse.grid import GridSpec
from qpse.spin import LN_2PI
from qpse.spinor import (
    SpinorField,
    apply_c,
    apply_cpt,
    apply_p,
    apply_t,
    check_gamma_algebra,
    density_residual,
    gamma_set,
    global_phase_overlap,
    spinor_entropy,
)
from qpse.states import SpinorPacketSpec, make_spinor_packet, random_spinor_field


def test_gamma_identities_hold_exactly():
    for name, residual in check_gamma_algebra().items():
        assert residual <= 1e-15, name


def test_gamma_matrices_are_read_only():
    with pytest.raises(ValueError):
        gamma_set().gamma0[0, 0] = 2.0


@pytest.mark.parametrize(
    "op, reflected",
    [(apply_c, False), (apply_p, True), (apply_t, False), (apply_cpt, True)],
    ids=["C", "P", "T", "CPT"],
)
def test_discrete_maps_keep_density_and_entropy(grid_1d, rng, op, reflected):
    for _ in range(5):
        field = random_spinor_field(rng, grid_1d)
        out = op(field)
        assert density_residual(field, out, reflected=reflected) < 1e-12
        before, after = spinor_entropy(field), spinor_entropy(out)
        assert after.s_r == pytest.approx(before.s_r, abs=1e-9)
        assert after.s_k == pytest.approx(before.s_k, abs=1e-9)
        assert after.s_total == pytest.approx(before.s_total, abs=1e-9)


def test_charge_conjugation_and_parity_are_involutions(grid_1d, rng):
    field = random_spinor_field(rng, grid_1d)
    np.testing.assert_allclose(apply_c(apply_c(field)).components, field.components, atol=1e-15)
    np.testing.assert_allclose(apply_p(apply_p(field)).components, field.components, atol=1e-15)


def test_time_reversal(grid_1d, rng):
    field = SpinorField(grid=grid_1d, components=random_spinor_field(rng, grid_1d).components, time_tag=1.5)
    once = apply_t(field)
    assert once.time_tag == -1.5
    twice = apply_t(once)
    # fermionic: T applied twice is -1
    np.testing.assert_allclose(twice.components, -field.components, atol=1e-15)
    assert twice.time_tag == 1.5
    assert global_phase_overlap(twice, field) == pytest.approx(1.0, abs=1e-12)


def test_spinor_packet_entropy(grid_1d):
    field = make_spinor_packet(SpinorPacketSpec(sigma=0.7, k0=1.5, branch="negative", spin_down=1.0), grid_1d)
    rep = spinor_entropy(field)
    assert rep.s_r + rep.s_k == pytest.approx(LN_E_PI, abs=1e-8)
    assert rep.s_spin == pytest.approx(math.log(2 * math.pi))
    assert rep.s_total == pytest.approx(LN_E_PI + LN_2PI, abs=1e-8)
    assert rep.norm_residual_r < 1e-10


def test_spinor_field_shape_checks(grid_1d):
    with pytest.raises(ValidationError):
        SpinorField(grid=grid_1d, components=np.zeros((3, 1024)))
    with pytest.raises(ValidationError):
        SpinorField(grid=GridSpec.centered(2, 32, 10.0), components=np.zeros((4, 32)))
