"""
experiment.py

JSON experiment spec files (schema 1) -> ExperimentSpec.

    {
      "schema": 1,
      "seed": 42,
      "grid": {"dim": 1, "points": 1024, "extent": 40.0},
      "state": {"kind": "gaussian", "sigma": 1.0, "center": 0.0, "k0": 0.0},
      "spin": {"s": "1/2", "mode": "single"},
      "entropy": true,
      "transforms": [{"kind": "translate_x", "amount": 1.5}],
      "evolution": {"potential": "free", "dt": 0.01, "steps": 200, "record_every": 10},
      "outputs": {"json_path": "report.json", "csv_path": "series.csv", "precision": 10}
    }

State kinds: gaussian, hermite, superposition, two_particle_gaussian,
random_superposition (drawn from `seed`), spinor_packet (entropy only).

Rules
- Unknown or duplicated keys are errors; every ValidationError carries the
  line of the offending key when it can be located in the source text.
- At least one of plain entropy, transforms or evolution must be requested.
- precision lies in [6, 17].
"""

from __future__ import annotations

import bisect
import json
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import config
from .dynamics import EvolutionSpec, Potential
from .errors import ValidationError
from .grid import GridSpec
from .report import DEFAULT_PRECISION, check_precision
from .spin import SpinSpec
from .states import (
    GaussianSpec,
    HermiteSpec,
    SpinorPacketSpec,
    StateSpec,
    SuperpositionSpec,
    TwoParticleGaussianSpec,
    make_spinor_packet,
    make_state,
    random_superposition,
)
from .transforms import TransformSpec


logger = logging.getLogger(__name__)


SCHEMA_VERSION = 1

TOP_KEYS = {"schema", "seed", "grid", "state", "spin", "entropy", "transforms", "evolution", "outputs"}
GRID_KEYS = {"dim", "points", "extent"}
OUTPUT_KEYS = {"json_path", "csv_path", "precision"}
EVOLUTION_KEYS = {"potential", "omega", "dt", "steps", "record_every"}
TRANSFORM_KEYS = {"kind", "amount", "mass"}
SPIN_KEYS = {"s", "mode", "theta_alpha"}
STATE_KEYS = {
    "gaussian": {"kind", "sigma", "center", "k0"},
    "hermite": {"kind", "index", "sigma", "center"},
    "superposition": {"kind", "terms"},
    "two_particle_gaussian": {"kind", "sigma", "correlation"},
    "random_superposition": {"kind", "n_terms", "max_index", "sigma"},
    "spinor_packet": {"kind", "center", "sigma", "k0", "branch", "spin_up", "spin_down", "mass"},
}
TERM_KEYS = {"coef", "state"}


@dataclass(frozen=True)
class RandomSuperpositionSpec:
    n_terms: int = 5
    max_index: int = 9
    sigma: float = 1.0


@dataclass(frozen=True)
class OutputSpec:
    json_path: str | None = None
    csv_path: str | None = None
    precision: int = DEFAULT_PRECISION


@dataclass(frozen=True)
class ExperimentSpec:
    grid: GridSpec
    state: StateSpec | RandomSuperpositionSpec
    seed: int = config.DEFAULT_SEED
    spin: SpinSpec | None = None
    entropy: bool = True
    transforms: tuple[TransformSpec, ...] = ()
    evolution: EvolutionSpec | None = None
    outputs: OutputSpec = field(default_factory=OutputSpec)
    source: Path | None = None

    @property
    def is_spinor(self) -> bool:
        return isinstance(self.state, SpinorPacketSpec)


_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|[{}\[\]:,]|[^\s{}\[\]:,"]+')


def _key_lines(text: str) -> tuple[dict[tuple, int], list[tuple[str, int]]]:
    """
    Line of every object key and array element, keyed by JSON path
    (("transforms", 1, "amount") -> 7), plus (key, line) of each repeated key.
    Expects syntactically valid JSON.
    """
    starts = [m.end() for m in re.finditer("\n", text)]
    lines: dict[tuple, int] = {}
    repeated: list[tuple[str, int]] = []
    stack: list[dict] = []

    for m in _TOKEN.finditer(text):
        tok, line = m.group(), bisect.bisect_right(starts, m.start()) + 1
        top = stack[-1] if stack else None
        if top is not None and top["object"] and top["expect_key"]:
            if tok == "}":
                stack.pop()
                continue
            top["key"] = json.loads(tok)
            top["expect_key"] = False
            path = top["path"] + (top["key"],)
            if path in lines:
                repeated.append((top["key"], line))
            lines[path] = line
            continue
        if tok == ":":
            continue
        if tok == ",":
            if top["object"]:
                top["expect_key"] = True
            else:
                top["index"] += 1
            continue
        if tok in "}]":
            stack.pop()
            continue

        if top is None:
            path = ()
        elif top["object"]:
            path = top["path"] + (top["key"],)
        else:
            path = top["path"] + (top["index"],)
            lines.setdefault(path, line)
        if tok == "{":
            stack.append({"object": True, "path": path, "expect_key": True, "key": None})
        elif tok == "[":
            stack.append({"object": False, "path": path, "index": 0})
    return lines, repeated


class _Source:
    """
    Raw spec text scoped to one JSON object, used to anchor errors on the
    line of a key. A key missing from the object falls back to the line that
    opened the object.
    """

    def __init__(self, text: str, lines: dict[tuple, int] | None = None, path: tuple = ()) -> None:
        self.text = text
        self.lines = _key_lines(text)[0] if lines is None else lines
        self.path = path

    def at(self, *parts) -> "_Source":
        return _Source(self.text, self.lines, self.path + parts)

    def line_of(self, key: str) -> int | None:
        return self.lines.get(self.path + (key,), self.lines.get(self.path))

    def error(self, key: str, msg: str) -> ValidationError:
        return ValidationError(msg, line=self.line_of(key))


class _DuplicateKey(ValueError):
    def __init__(self, key: str) -> None:
        super().__init__(key)
        self.key = key


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise _DuplicateKey(k)
        out[k] = v
    return out


def _object(src: _Source, value, where: str, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(value, dict):
        raise src.error(where, f"{where} must be a JSON object")
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise src.error(unknown[0], f"unknown key {unknown[0]!r} in {where}; allowed: {sorted(allowed)}")
    missing = sorted(required - set(value))
    if missing:
        raise src.error(where, f"{where} is missing required key {missing[0]!r}")
    return value


def _number(src: _Source, obj: dict, key: str, default=None, integer: bool = False):
    if key not in obj:
        return default
    v = obj[key]
    ok = isinstance(v, int) if integer else isinstance(v, (int, float))
    if isinstance(v, bool) or not ok:
        kind = "an integer" if integer else "a number"
        raise src.error(key, f"{key} must be {kind} (got {v!r})")
    return v


def _numbers(src: _Source, obj: dict, key: str, default=None):
    """A number, or a list of numbers (one per axis)."""
    if key not in obj:
        return default
    v = obj[key]
    if isinstance(v, list):
        if not v or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v):
            raise src.error(key, f"{key} must be a number or a non-empty list of numbers")
        return tuple(float(x) for x in v)
    return float(_number(src, obj, key))


def _complex(src: _Source, v, key: str) -> complex:
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise src.error(key, f"{key} must be a number or a [re, im] pair (got {v!r})")


# -----------------------------
# Sections
# -----------------------------

def _grid(src: _Source, raw) -> GridSpec:
    g = _object(src, raw, "grid", GRID_KEYS, required=GRID_KEYS)
    dim = _number(src, g, "dim", integer=True)
    points = _number(src, g, "points", integer=True)
    extent = _number(src, g, "extent")
    if not extent > 0:
        raise src.error("extent", f"extent must be > 0 (got {extent})")
    try:
        return GridSpec.centered(dim, points, extent)
    except ValidationError as e:
        raise src.error("grid", str(e)) from e


def _state(src: _Source, raw, nested: bool = False):
    if not isinstance(raw, dict) or "kind" not in raw:
        raise src.error("state", "state must be an object with a 'kind'")
    kind = raw["kind"]
    if kind not in STATE_KEYS:
        raise src.error("kind", f"unknown state kind {kind!r}; expected one of {sorted(STATE_KEYS)}")
    s = _object(src, raw, "state", STATE_KEYS[kind])
    if nested and kind not in ("gaussian", "hermite", "superposition"):
        raise src.error("kind", f"{kind} cannot appear inside a superposition")

    if kind == "gaussian":
        return GaussianSpec(
            sigma=_numbers(src, s, "sigma", 1.0),
            center=_numbers(src, s, "center", 0.0),
            k0=_numbers(src, s, "k0", 0.0),
        )
    if kind == "hermite":
        index = s.get("index", 0)
        if isinstance(index, list):
            if not all(isinstance(i, int) and not isinstance(i, bool) for i in index):
                raise src.error("index", "hermite index must be an integer or a list of integers")
            index = tuple(index)
        else:
            index = _number(src, s, "index", 0, integer=True)
        return HermiteSpec(index=index, sigma=float(_number(src, s, "sigma", 1.0)), center=_numbers(src, s, "center", 0.0))
    if kind == "superposition":
        terms = s.get("terms")
        if not isinstance(terms, list) or not terms:
            raise src.error("terms", "superposition needs a non-empty 'terms' list")
        out = []
        for i, t in enumerate(terms):
            term = src.at("terms", i)
            t = _object(term, t, "terms", TERM_KEYS, required=TERM_KEYS)
            out.append((_complex(term, t["coef"], "coef"), _state(term.at("state"), t["state"], nested=True)))
        return SuperpositionSpec(terms=tuple(out))
    if kind == "two_particle_gaussian":
        return TwoParticleGaussianSpec(
            sigma=float(_number(src, s, "sigma", 1.0)),
            correlation=float(_number(src, s, "correlation", 0.0)),
        )
    if kind == "random_superposition":
        return RandomSuperpositionSpec(
            n_terms=_number(src, s, "n_terms", 5, integer=True),
            max_index=_number(src, s, "max_index", 9, integer=True),
            sigma=float(_number(src, s, "sigma", 1.0)),
        )
    branch = s.get("branch", "positive")
    if branch not in ("positive", "negative"):
        raise src.error("branch", f"branch must be 'positive' or 'negative' (got {branch!r})")
    return SpinorPacketSpec(
        center=float(_number(src, s, "center", 0.0)),
        sigma=float(_number(src, s, "sigma", 1.0)),
        k0=float(_number(src, s, "k0", 0.0)),
        branch=branch,
        spin_up=_complex(src, s.get("spin_up", 1.0), "spin_up"),
        spin_down=_complex(src, s.get("spin_down", 0.0), "spin_down"),
        mass=float(_number(src, s, "mass", 1.0)),
    )


def _spin(src: _Source, raw) -> SpinSpec:
    s = _object(src, raw, "spin", SPIN_KEYS)
    value = s.get("s", "1/2")
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise src.error("s", f"spin s must be a number or a fraction string (got {value!r})")
    try:
        return SpinSpec(
            s=Fraction(value) if isinstance(value, str) else value,
            mode=s.get("mode", "single"),
            theta_alpha=_number(src, s, "theta_alpha"),
        )
    except (ValueError, ZeroDivisionError) as e:
        raise src.error("s", f"cannot read spin value {value!r}") from e
    except ValidationError as e:
        raise src.error("spin", str(e)) from e


def _transforms(src: _Source, raw) -> tuple[TransformSpec, ...]:
    if not isinstance(raw, list):
        raise src.error("transforms", "transforms must be a list")
    out = []
    for i, t in enumerate(raw):
        item = src.at(i)
        t = _object(item, t, "transforms", TRANSFORM_KEYS, required={"kind"})
        try:
            out.append(TransformSpec(
                kind=t["kind"],
                amount=float(_number(item, t, "amount", 0.0)),
                mass=_number(item, t, "mass"),
            ))
        except ValidationError as e:
            raise item.error("amount" if "amount" in t else "kind", str(e)) from e
    return tuple(out)


def _evolution(src: _Source, raw) -> EvolutionSpec:
    e = _object(src, raw, "evolution", EVOLUTION_KEYS, required={"dt", "steps"})
    try:
        potential = Potential(kind=e.get("potential", "free"), omega=_number(src, e, "omega"))
        return EvolutionSpec(
            potential=potential,
            dt=float(_number(src, e, "dt")),
            steps=_number(src, e, "steps", integer=True),
            record_every=_number(src, e, "record_every", 1, integer=True),
        )
    except ValidationError as err:
        if err.line is not None:
            raise
        raise src.error("evolution", str(err)) from err


def _outputs(src: _Source, raw) -> OutputSpec:
    o = _object(src, raw, "outputs", OUTPUT_KEYS)
    for key in ("json_path", "csv_path"):
        if key in o and not isinstance(o[key], str):
            raise src.error(key, f"{key} must be a string")
    precision = _number(src, o, "precision", DEFAULT_PRECISION, integer=True)
    try:
        check_precision(precision)
    except ValidationError as e:
        raise src.error("precision", str(e)) from e
    return OutputSpec(json_path=o.get("json_path"), csv_path=o.get("csv_path"), precision=precision)


# -----------------------------
# Entry points
# -----------------------------

def parse_experiment(text: str, source: Path | None = None) -> ExperimentSpec:
    try:
        raw = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    except _DuplicateKey as e:
        _, repeated = _key_lines(text)
        line = next((n for key, n in repeated if key == e.key), None)
        raise ValidationError(f"duplicate key {e.key!r}", line=line) from e

    src = _Source(text)
    top = _object(src, raw, "spec", TOP_KEYS, required={"schema", "grid", "state"})
    if top["schema"] != SCHEMA_VERSION or isinstance(top["schema"], bool):
        raise src.error("schema", f"unsupported schema {top['schema']!r} (expected {SCHEMA_VERSION})")

    seed = _number(src, top, "seed", config.DEFAULT_SEED, integer=True)
    if seed < 0:
        raise src.error("seed", f"seed must be >= 0 (got {seed})")

    entropy = top.get("entropy", True)
    if not isinstance(entropy, bool):
        raise src.error("entropy", "entropy must be true or false")

    spec = ExperimentSpec(
        grid=_grid(src.at("grid"), top["grid"]),
        state=_state(src.at("state"), top["state"]),
        seed=seed,
        spin=_spin(src.at("spin"), top["spin"]) if "spin" in top else None,
        entropy=entropy,
        transforms=_transforms(src.at("transforms"), top["transforms"]) if "transforms" in top else (),
        evolution=_evolution(src.at("evolution"), top["evolution"]) if "evolution" in top else None,
        outputs=_outputs(src.at("outputs"), top["outputs"]) if "outputs" in top else OutputSpec(),
        source=source,
    )

    if not (spec.entropy or spec.transforms or spec.evolution):
        raise src.error("entropy", "nothing to do: request entropy, transforms or an evolution")
    if spec.is_spinor and (spec.transforms or spec.evolution):
        raise src.error("state", "spinor_packet states support plain entropy only")
    if spec.is_spinor and spec.spin is not None:
        raise src.error("spin", "spinor_packet states carry their own spin; remove the spin block")
    if isinstance(spec.state, TwoParticleGaussianSpec) and spec.grid.dim != 2:
        raise src.error("grid", "two_particle_gaussian needs a 2D grid")
    if spec.is_spinor and spec.grid.dim != 1:
        raise src.error("grid", "spinor_packet needs a 1D grid")

    logger.debug("parsed experiment spec (seed=%d, %d transforms, evolution=%s)",
                 spec.seed, len(spec.transforms), spec.evolution is not None)
    return spec


def load_experiment(path: Path | str) -> ExperimentSpec:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"spec file not found: {path}")
    return parse_experiment(path.read_text(encoding="utf-8"), source=path)


def build_state(spec: ExperimentSpec):
    """WaveFunction (or SpinorField for spinor packets) described by the experiment."""
    if isinstance(spec.state, RandomSuperpositionSpec):
        rng = np.random.default_rng(spec.seed)
        _, psi = random_superposition(
            rng, spec.grid, n_terms=spec.state.n_terms, max_index=spec.state.max_index, sigma=spec.state.sigma,
        )
        return psi
    if spec.is_spinor:
        return make_spinor_packet(spec.state, spec.grid)
    return make_state(spec.state, spec.grid)
