import math

import numpy as np
import pytest

from qpse.entropy import LN_E_PI, continuous_entropy
from qpse.dynamics import (
    SERIES_COLUMNS,
    EvolutionSpec,
    Potential,
    entropy_series,
    evolve,
    free_gaussian_width,
)
from qpse.errors import EdgeMassExceeded, ValidationError
from qpse.grid import GridSpec, mass
from qpse.spectral import density_k, to_k_space
from qpse.states import GaussianSpec, make_state


def _free_s_r(sigma0, t):
    return 0.5 * math.log(2 * math.pi * math.e * free_gaussian_width(sigma0, t) ** 2)


def test_free_width():
    assert free_gaussian_width(1.0, 2.0) == pytest.approx(math.sqrt(2.0))
    assert free_gaussian_width(0.5, 0.0) == 0.5
    with pytest.raises(ValidationError):
        free_gaussian_width(0.0, 1.0)


def test_free_gaussian_follows_closed_form(gaussian_1d):
    snaps = evolve(gaussian_1d, EvolutionSpec(dt=0.01, steps=200, record_every=50))
    assert [round(t, 12) for t, _ in snaps] == [0.0, 0.5, 1.0, 1.5, 2.0]

    df = entropy_series(snaps)
    assert list(df.columns) == SERIES_COLUMNS
    for t, s_r in zip(df["t"], df["s_r"]):
        assert s_r == pytest.approx(_free_s_r(1.0, t), abs=1e-4)
    assert (df["s_k"] - df["s_k"].iloc[0]).abs().max() < 1e-10
    assert df["norm_residual"].max() < 1e-10
    assert df["s_total"].iloc[-1] == pytest.approx(LN_E_PI + 0.5 * math.log(2.0), abs=1e-4)
    assert df.attrs["n_decreasing"] == 0
    assert df.attrs["max_decrease"] == 0.0


def test_free_flight_keeps_momentum_density(grid_1d):
    psi = make_state(GaussianSpec(sigma=1.0, k0=1.0), grid_1d)
    snaps = evolve(psi, EvolutionSpec(dt=0.01, steps=100, record_every=100))
    before = density_k(to_k_space(psi)).values
    after = density_k(to_k_space(snaps[-1][1])).values
    np.testing.assert_allclose(after, before, atol=1e-10)
    assert mass(snaps[-1][1]) == pytest.approx(1.0, abs=1e-10)


def test_harmonic_coherent_state_keeps_its_entropy(grid_1d):
    omega = 1.0
    psi = make_state(GaussianSpec(sigma=1.0 / math.sqrt(2 * omega), center=2.0), grid_1d)
    steps = math.ceil(2 * math.pi / omega / 0.01)
    spec = EvolutionSpec(potential=Potential("harmonic", omega), dt=0.01, steps=steps, record_every=10)
    df = entropy_series(evolve(psi, spec))
    assert (df["s_total"] - LN_E_PI).abs().max() < 1e-4
    assert df["norm_residual"].max() < 1e-10


def test_harmonic_step_refinement(grid_1d):
    psi = make_state(GaussianSpec(sigma=1.0 / math.sqrt(2), center=2.0), grid_1d)
    potential = Potential("harmonic", 1.0)
    coarse = evolve(psi, EvolutionSpec(potential=potential, dt=0.01, steps=100, record_every=100))[-1][1]
    fine = evolve(psi, EvolutionSpec(potential=potential, dt=0.005, steps=200, record_every=200))[-1][1]
    assert abs(continuous_entropy(coarse).s_total - continuous_entropy(fine).s_total) < 1e-6


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(dt=0.0),
        dict(dt=float("nan")),
        dict(steps=-1),
        dict(steps=2.5),
        dict(record_every=0),
        dict(potential=Potential("harmonic", 1.0), dt=0.2),
    ],
)
def test_evolution_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        EvolutionSpec(**kwargs)


@pytest.mark.parametrize("kind, omega", [("quartic", None), ("free", 1.0), ("harmonic", None), ("harmonic", -1.0)])
def test_potential_validation(kind, omega):
    with pytest.raises(ValidationError):
        Potential(kind, omega)


def test_dt_at_the_harmonic_limit_is_accepted():
    EvolutionSpec(potential=Potential("harmonic", 2.0), dt=0.05)


def test_packet_hitting_the_edge_aborts(caplog):
    grid = GridSpec.centered(1, 512, 30.0)
    psi = make_state(GaussianSpec(sigma=1.0, k0=5.0), grid)
    with caplog.at_level("WARNING", logger="qpse.dynamics"):
        with pytest.raises(EdgeMassExceeded, match="EdgeMassExceeded"):
            evolve(psi, EvolutionSpec(dt=0.01, steps=400))
    assert "box edge" in caplog.text


def test_unnormalized_state_is_rejected(gaussian_1d):
    doubled = gaussian_1d.replace(amplitudes=2 * gaussian_1d.amplitudes)
    with pytest.raises(ValidationError):
        evolve(doubled, EvolutionSpec(steps=1))


def test_series_edge_cases(gaussian_1d):
    with pytest.raises(ValidationError):
        entropy_series([])
    df = entropy_series(evolve(gaussian_1d, EvolutionSpec(steps=0)))
    assert len(df) == 1
    assert "n_decreasing" not in df.attrs
    assert df["s_total"].iloc[0] == pytest.approx(LN_E_PI, abs=1e-8)


def test_final_step_is_always_recorded(gaussian_1d):
    snaps = evolve(gaussian_1d, EvolutionSpec(dt=0.01, steps=7, record_every=3))
    assert [round(t, 12) for t, _ in snaps] == [0.0, 0.03, 0.06, 0.07]
    assert snaps[-1][1].time_tag == pytest.approx(0.07)
