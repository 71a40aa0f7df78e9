import math
import logging
import os

import numpy as np
import pytest

from qpse import config
from qpse.errors import GridMismatch, NotNormalized
from qpse.grid import GridSpec, moments
from qpse.spectral import (
    KAmplitude,
    density_k,
    evaluate_k,
    from_k_space,
    is_conjugate,
    kgrid_for,
    to_k_space,
)
from qpse.states import GaussianSpec, make_state


def test_kgrid_is_conjugate(grid_1d):
    k = kgrid_for(grid_1d)
    dk = 2 * math.pi / 40.0
    assert k.spacing[0] == pytest.approx(dk)
    assert k.origin[0] == pytest.approx(-512 * dk)
    assert is_conjugate(grid_1d, k)
    assert k.axes()[0][512] == pytest.approx(0.0, abs=1e-12)


def test_parseval(gaussian_1d):
    phi = to_k_space(gaussian_1d)
    assert phi.mass() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
def test_gaussian_momentum_density_is_analytic(sigma):
    grid = GridSpec.centered(1, 1024, 40.0 * sigma)
    rho_k = density_k(to_k_space(make_state(GaussianSpec(sigma=sigma), grid)))
    k = rho_k.grid.axes()[0]
    sk = 1.0 / (2.0 * sigma)
    expected = np.exp(-(k**2) / (2 * sk**2)) / math.sqrt(2 * math.pi * sk**2)
    np.testing.assert_allclose(rho_k.values, expected, atol=1e-10)


def test_boosted_gaussian_centres_on_k0(grid_1d):
    psi = make_state(GaussianSpec(sigma=1.0, k0=2.5), grid_1d)
    means, stds = moments(density_k(to_k_space(psi)))
    assert means[0] == pytest.approx(2.5, abs=1e-10)
    assert stds[0] == pytest.approx(0.5, abs=1e-10)


def test_inverse_recovers_state(gaussian_1d):
    back = from_k_space(to_k_space(gaussian_1d))
    np.testing.assert_allclose(back.amplitudes, gaussian_1d.amplitudes, atol=1e-12)


def test_inverse_rejects_foreign_grid(gaussian_1d):
    phi = to_k_space(gaussian_1d)
    with pytest.raises(GridMismatch):
        from_k_space(phi, grid=GridSpec.centered(1, 1024, 30.0))


def test_inverse_requires_unit_mass(gaussian_1d):
    phi = to_k_space(gaussian_1d)
    doubled = KAmplitude(kgrid=phi.kgrid, amplitudes=2 * phi.amplitudes, xgrid=phi.xgrid)
    with pytest.raises(NotNormalized):
        from_k_space(doubled)


def test_evaluate_k_matches_grid_transform(gaussian_1d):
    psi = make_state(GaussianSpec(sigma=1.0, center=1.0, k0=-1.0), gaussian_1d.grid)
    phi = to_k_space(psi)
    k = phi.kgrid.axes()[0]
    np.testing.assert_allclose(evaluate_k(psi, k[400:600]), phi.amplitudes[400:600], atol=1e-10)


def test_fft_workers_env(monkeypatch, caplog):
    monkeypatch.setenv("QPSE_THREADS", "2")
    assert config.fft_workers() == 2

    monkeypatch.setenv("QPSE_THREADS", "many")
    with caplog.at_level(logging.WARNING, logger="qpse.config"):
        assert config.fft_workers() == (os.cpu_count() or 1)
    assert "QPSE_THREADS" in caplog.text

    monkeypatch.delenv("QPSE_THREADS")
    assert config.fft_workers() == (os.cpu_count() or 1)


def test_single_mode_is_a_plane_wave(grid_1d):
    kgrid = kgrid_for(grid_1d)
    dk = kgrid.spacing[0]
    j = 512 + 7
    amplitudes = np.zeros(1024, dtype=complex)
    amplitudes[j] = 1.0 / math.sqrt(dk)
    psi = from_k_space(KAmplitude(kgrid=kgrid, amplitudes=amplitudes, xgrid=grid_1d))

    k = kgrid.axes()[0][j]
    x = grid_1d.axes()[0]
    expected = np.exp(1j * k * x) / math.sqrt(grid_1d.extent[0])
    np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-12)
    assert np.ptp(np.abs(psi.amplitudes) ** 2) < 1e-14
