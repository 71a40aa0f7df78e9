import pytest

from qpse.errors import ValidationError
from qpse.experiment import RandomSuperpositionSpec, build_state, load_experiment, parse_experiment
from qpse.grid import mass
from qpse.states import GaussianSpec, SuperpositionSpec


BASE = """{
  "schema": 1,
  "grid": {"dim": 1, "points": 512, "extent": 30.0},
  "state": {"kind": "gaussian", "sigma": 1.0}%s
}"""


def test_minimal_spec_defaults():
    spec = parse_experiment(BASE % "")
    assert spec.seed == 42
    assert spec.entropy is True
    assert spec.transforms == ()
    assert spec.evolution is None
    assert spec.outputs.precision == 10
    assert spec.state == GaussianSpec(sigma=1.0)
    assert mass(build_state(spec)) == pytest.approx(1.0, abs=1e-10)


def test_full_spec():
    extra = """,
  "seed": 9,
  "spin": {"s": "1/2"},
  "transforms": [{"kind": "dilate", "amount": 2}, {"kind": "lorentz_boost_k", "amount": 0.5, "mass": 1}],
  "evolution": {"potential": "harmonic", "omega": 1.0, "dt": 0.01, "steps": 10},
  "outputs": {"csv_path": "s.csv", "precision": 12}"""
    spec = parse_experiment(BASE % extra)
    assert spec.seed == 9
    assert [t.kind for t in spec.transforms] == ["dilate", "lorentz_boost_k"]
    assert spec.evolution.potential.omega == 1.0
    assert spec.evolution.record_every == 1
    assert spec.outputs.csv_path == "s.csv"
    assert spec.outputs.json_path is None


def test_unknown_key_reports_its_line():
    text = BASE % ',\n  "colour": "blue"'
    with pytest.raises(ValidationError, match="line 5") as info:
        parse_experiment(text)
    assert info.value.line == 5
    assert "colour" in str(info.value)


def test_invalid_json_reports_its_line():
    with pytest.raises(ValidationError) as info:
        parse_experiment('{\n  "schema": 1,\n  "grid": {\n}}}')
    assert info.value.line == 4


@pytest.mark.parametrize(
    "text",
    [
        BASE.replace('"schema": 1', '"schema": 2') % "",
        BASE.replace('"schema": 1', '"schema": true') % "",
        BASE % ',\n  "outputs": {"precision": 5}',
        BASE % ',\n  "seed": -1',
        BASE % ',\n  "entropy": false',
        BASE % ',\n  "entropy": "yes"',
        BASE % ',\n  "evolution": {"dt": 0.01}',
        BASE % ',\n  "transforms": {"kind": "parity"}',
        BASE % ',\n  "transforms": [{"kind": "spin"}]',
        BASE % ',\n  "spin": {"s": 1}',
        BASE.replace('"points": 512', '"points": 4') % "",
        BASE.replace('"sigma": 1.0', '"sigma": "wide"') % "",
    ],
    ids=["schema2", "schema-bool", "precision5", "seed", "nothing-to-do", "entropy-str", "evo-steps",
         "transforms-obj", "transform-kind", "spin-1", "tiny-grid", "sigma-str"],
)
def test_rejected_specs(text):
    with pytest.raises(ValidationError):
        parse_experiment(text)


def test_duplicate_keys_are_rejected():
    with pytest.raises(ValidationError, match="duplicate key 'state'") as info:
        parse_experiment(BASE % ',\n  "state": {"kind": "hermite"}')
    assert info.value.line == 5
    with pytest.raises(ValidationError, match="duplicate key 'dim'") as info:
        parse_experiment(BASE.replace('"dim": 1,', '"dim": 1, "dim": 2,') % "")
    assert info.value.line == 3


def test_errors_point_at_the_offending_element():
    text = """{
  "schema": 1,
  "grid": {"dim": 1, "points": 512, "extent": 30.0},
  "state": {"kind": "gaussian", "sigma": 1.0},
  "transforms": [
    {"kind": "dilate", "amount": 2.0},
    {"kind": "dilate", "amount": -2.0}
  ]
}"""
    with pytest.raises(ValidationError, match="line 7"):
        parse_experiment(text)

    state = """{"kind": "superposition", "terms": [
      {"coef": 1, "state": {"kind": "hermite", "index": 0}},
      {"coef": 1, "state": {"kind": "hermite", "index": "two"}}
    ]}"""
    with pytest.raises(ValidationError, match="index") as info:
        parse_experiment(BASE.replace('{"kind": "gaussian", "sigma": 1.0}', state) % "")
    assert info.value.line == 6


def test_state_kind_rules():
    two = BASE.replace('{"kind": "gaussian", "sigma": 1.0}', '{"kind": "two_particle_gaussian", "correlation": 0.5}')
    with pytest.raises(ValidationError, match="2D"):
        parse_experiment(two % "")
    spinor = BASE.replace('{"kind": "gaussian", "sigma": 1.0}', '{"kind": "spinor_packet", "spin_down": [0, 1]}')
    assert parse_experiment(spinor % "").is_spinor
    with pytest.raises(ValidationError, match="entropy only"):
        parse_experiment(spinor % ',\n  "transforms": [{"kind": "parity"}]')
    with pytest.raises(ValidationError, match="own spin") as info:
        parse_experiment(spinor % ',\n  "spin": {"s": "1/2"}')
    assert info.value.line == 5


def test_superposition_terms():
    state = """{"kind": "superposition", "terms": [
      {"coef": 1, "state": {"kind": "hermite", "index": 0}},
      {"coef": [0, 1], "state": {"kind": "gaussian", "center": 2.0}}
    ]}"""
    spec = parse_experiment(BASE.replace('{"kind": "gaussian", "sigma": 1.0}', state) % "")
    assert isinstance(spec.state, SuperpositionSpec)
    assert spec.state.terms[1][0] == 1j
    assert mass(build_state(spec)) == pytest.approx(1.0, abs=1e-10)

    nested = state.replace('{"kind": "hermite", "index": 0}', '{"kind": "random_superposition"}')
    with pytest.raises(ValidationError, match="inside a superposition"):
        parse_experiment(BASE.replace('{"kind": "gaussian", "sigma": 1.0}', nested) % "")


def test_random_superposition_uses_the_seed():
    text = BASE.replace('{"kind": "gaussian", "sigma": 1.0}', '{"kind": "random_superposition", "n_terms": 3}')
    a = parse_experiment(text % ',\n  "seed": 3')
    b = parse_experiment(text % ',\n  "seed": 3')
    c = parse_experiment(text % ',\n  "seed": 4')
    assert a.state == RandomSuperpositionSpec(n_terms=3)
    assert (build_state(a).amplitudes == build_state(b).amplitudes).all()
    assert not (build_state(a).amplitudes == build_state(c).amplitudes).all()


def test_load_missing_file(tmp_path):
    with pytest.raises(ValidationError, match="not found"):
        load_experiment(tmp_path / "nope.json")


def test_load_keeps_the_source(tmp_spec):
    path = tmp_spec(BASE % "")
    assert load_experiment(path).source == path
