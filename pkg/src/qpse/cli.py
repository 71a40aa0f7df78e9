"""
cli.py

Command-line entry point.

    qpse <subcommand> [SPEC | --spec FILE] [--seed N] [--out DIR] [--precision D]
                      [--units nats|bits] [--verbose]

Subcommands
- entropy SPEC      single entropy report (JSON)
- invariance SPEC   each transform applied to the state; entropy deltas (JSON + CSV)
- evolve SPEC       entropy time series (CSV columns t,s_r,s_k,s_total,bbm_margin,norm_residual)
- run SPEC          everything the experiment requests (entropy / transforms / evolution)
- verify            built-in check suite; traceability table on stdout (CSV with --out)
- spin              spin-entropy constants, or the entangled-pair value with --theta

Outputs
- Relative output paths in an experiment file resolve against --out, else its directory.
  Without an `outputs` block, files are only written when --out is given.
- Files are written atomically with fixed precision; --units only affects stdout.

Exit codes: 0 ok, 1 verify found failing checks, 2 validation error,
3 numerical guard, 64 usage.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import sys
from pathlib import Path
from typing import NoReturn

import pandas as pd

from . import config
from .dynamics import entropy_series, evolve
from .entropy import EntropyReport, continuous_entropy, joint_entropy_two_particle, to_bits
from .errors import NumericalGuard, ValidationError
from .experiment import ExperimentSpec, build_state, load_experiment
from .report import DEFAULT_PRECISION, check_precision, write_csv, write_json
from .spin import LN_2PI, SpinSpec, compose_total, spin_entropy, spin_entropy_single
from .spinor import SpinorField, spinor_entropy
from .spectral import to_k_space
from .states import TwoParticleGaussianSpec
from .transforms import apply_transform, boosted_probability, entropy_delta, lorentz_measure_check
from .verify import run_suite


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_VALIDATION = 2
EXIT_GUARD = 3
EXIT_USAGE = 64

INVARIANCE_COLUMNS = ["kind", "amount", "mass", "d_s_r", "d_s_k", "d_s_total",
                      "measure_residual", "boosted_probability"]


class QpseArgumentParser(argparse.ArgumentParser):
    """argparse with the usage exit code 64."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"[ERROR] {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def die(msg: str, code: int) -> NoReturn:
    print(f"[ERROR] {msg}", file=sys.stderr)
    raise SystemExit(code)


# -----------------------------
# Helpers
# -----------------------------

def _fmt(value: float, args) -> str:
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return "nan"
    v = to_bits(value) if args.units == "bits" else value
    return f"{v:.{args.precision_resolved}g}"


def _load(args) -> ExperimentSpec:
    path = args.spec_opt or args.spec
    if path is None:
        args.parser.error(f"{args.command} needs a spec file (positional or --spec)")
    spec = load_experiment(path)
    logger.debug("loaded %s", path)
    if args.seed is not None:
        if args.seed < 0:
            raise ValidationError(f"--seed must be >= 0 (got {args.seed})")
        spec = dataclasses.replace(spec, seed=args.seed)
    precision = args.precision if args.precision is not None else spec.outputs.precision
    args.precision_resolved = check_precision(precision)
    return spec


def _output_path(args, spec: ExperimentSpec, configured: str | None, suffix: str) -> Path | None:
    out_dir = Path(args.out) if args.out else None
    if configured:
        p = Path(configured)
        if not p.is_absolute():
            p = (out_dir or (spec.source.parent if spec.source else Path.cwd())) / p
        if spec.source is not None and p.resolve() == spec.source.resolve():
            raise ValidationError(f"output path {configured!r} would overwrite the experiment file")
        return p
    if out_dir is not None:
        stem = spec.source.stem if spec.source else "experiment"
        return out_dir / f"{stem}_{args.command}{suffix}"
    return None


def _write(args, spec: ExperimentSpec, payload: dict, table: pd.DataFrame | None) -> None:
    p = args.precision_resolved
    json_path = _output_path(args, spec, spec.outputs.json_path, ".json")
    if json_path is not None:
        print(f"Saved: {write_json(json_path, payload, p)}")
    if table is not None:
        csv_path = _output_path(args, spec, spec.outputs.csv_path, ".csv")
        if csv_path is not None:
            print(f"Saved: {write_csv(csv_path, table, p)}")


def _report_for(spec: ExperimentSpec, state) -> EntropyReport:
    if isinstance(state, SpinorField):
        report = spinor_entropy(state)
        return dataclasses.replace(report, seed=spec.seed)
    if isinstance(spec.state, TwoParticleGaussianSpec):
        report = joint_entropy_two_particle(state, seed=spec.seed)
    else:
        report = continuous_entropy(state, seed=spec.seed)
    if spec.spin is not None:
        report = compose_total(report, spec.spin)
    return report


# -----------------------------
# Sections
# -----------------------------

def _entropy_section(args, spec: ExperimentSpec, state) -> dict:
    report = _report_for(spec, state)
    print(f"S_r = {_fmt(report.s_r, args)}  S_k = {_fmt(report.s_k, args)}  "
          f"S_spin = {_fmt(report.s_spin, args)}  S_total = {_fmt(report.s_total, args)}  [{args.units}]")
    print(f"BBM margin = {_fmt(report.bbm_margin, args)}")
    return report.to_dict()


def _invariance_section(args, spec: ExperimentSpec, psi) -> pd.DataFrame:
    before = continuous_entropy(psi)
    rows = []
    for t in spec.transforms:
        row = {"kind": t.kind, "amount": t.amount, "mass": t.mass if t.mass is not None else float("nan"),
               "d_s_r": float("nan"), "d_s_k": float("nan"), "d_s_total": float("nan"),
               "measure_residual": float("nan"), "boosted_probability": float("nan")}
        if t.kind == "lorentz_boost_k":
            phi = to_k_space(psi)
            row["measure_residual"] = lorentz_measure_check(phi, t.amount, t.mass)
            row["boosted_probability"] = boosted_probability(phi, t.amount, t.mass)
            print(f"{t.kind:<16} eta={t.amount:g} m={t.mass:g}  |I - I'| = {row['measure_residual']:.3e}")
        else:
            d = entropy_delta(before, continuous_entropy(apply_transform(psi, t)))
            row.update(d_s_r=d.d_s_r, d_s_k=d.d_s_k, d_s_total=d.d_s_total)
            print(f"{t.kind:<16} amount={t.amount:g}  dS_r = {_fmt(d.d_s_r, args)}  "
                  f"dS_k = {_fmt(d.d_s_k, args)}  dS = {_fmt(d.d_s_total, args)}")
        rows.append(row)
    return pd.DataFrame(rows, columns=INVARIANCE_COLUMNS)


def _evolve_section(args, spec: ExperimentSpec, psi) -> tuple[dict, pd.DataFrame]:
    if spec.evolution is None:
        raise ValidationError("spec has no 'evolution' block")
    df = entropy_series(evolve(psi, spec.evolution))
    last = df.iloc[-1]
    print(f"Rows: {len(df):,}  t_end = {last['t']:g}  S_total(t_end) = {_fmt(float(last['s_total']), args)}")
    summary = {
        "rows": len(df),
        "n_decreasing": df.attrs.get("n_decreasing"),
        "max_decrease": df.attrs.get("max_decrease"),
        "final": {k: float(last[k]) for k in df.columns},
    }
    if "n_decreasing" in df.attrs:
        print(f"S_total decreasing steps: {df.attrs['n_decreasing']}  max decrease: {df.attrs['max_decrease']:.3e}")
    return summary, df


def _payload(args, spec: ExperimentSpec) -> dict:
    return {"command": args.command, "schema": 1, "seed": spec.seed}


def _need_wavefunction(spec: ExperimentSpec, command: str) -> None:
    if spec.is_spinor:
        raise ValidationError(f"{command} needs a scalar state; spinor_packet supports entropy only")


# -----------------------------
# Commands
# -----------------------------

def cmd_entropy(args) -> int:
    spec = _load(args)
    state = build_state(spec)
    payload = _payload(args, spec)
    payload["report"] = _entropy_section(args, spec, state)
    _write(args, spec, payload, None)
    return EXIT_OK


def cmd_invariance(args) -> int:
    spec = _load(args)
    _need_wavefunction(spec, "invariance")
    if not spec.transforms:
        raise ValidationError("spec has no 'transforms'")
    table = _invariance_section(args, spec, build_state(spec))
    payload = _payload(args, spec)
    payload["transforms"] = table.to_dict(orient="records")
    _write(args, spec, payload, table)
    return EXIT_OK


def cmd_evolve(args) -> int:
    spec = _load(args)
    _need_wavefunction(spec, "evolve")
    summary, df = _evolve_section(args, spec, build_state(spec))
    payload = _payload(args, spec)
    payload["evolution"] = summary
    _write(args, spec, payload, df)
    return EXIT_OK


def cmd_run(args) -> int:
    """Everything the experiment requests; the CSV is the series when evolving, else the transform table."""
    spec = _load(args)
    state = build_state(spec)
    payload = _payload(args, spec)
    table = None
    if spec.entropy:
        payload["report"] = _entropy_section(args, spec, state)
    if spec.transforms:
        table = _invariance_section(args, spec, state)
        payload["transforms"] = table.to_dict(orient="records")
    if spec.evolution is not None:
        payload["evolution"], table = _evolve_section(args, spec, state)
    _write(args, spec, payload, table)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = config.DEFAULT_SEED if args.seed is None else args.seed
    precision = check_precision(args.precision if args.precision is not None else DEFAULT_PRECISION)
    df = run_suite(seed)

    with pd.option_context("display.max_rows", None, "display.width", 160, "display.max_colwidth", 60):
        print(df.to_string(index=False))
    n_pass = int((df["status"] == "pass").sum())
    print(f"\n{n_pass}/{len(df)} checks pass")

    if args.out:
        print(f"Saved: {write_csv(Path(args.out) / 'verify_traceability.csv', df, precision)}")
    return EXIT_OK if n_pass == len(df) else EXIT_FAILED_CHECKS


def cmd_spin(args) -> int:
    precision = check_precision(args.precision if args.precision is not None else DEFAULT_PRECISION)
    args.precision_resolved = precision
    if args.theta is None:
        rows = {"s=0": spin_entropy_single(0), "s=1/2": spin_entropy_single(0.5)}
        for label, value in rows.items():
            print(f"S_spin({label}) = {_fmt(value, args)}  [{args.units}]")
        payload = {"command": "spin", "single": rows}
    else:
        if not math.isfinite(args.theta):
            raise ValidationError(f"--theta must be finite (got {args.theta})")
        spec = SpinSpec(mode="entangled_pair", theta_alpha=args.theta)
        value = spin_entropy(spec)
        print(f"S_pair(theta={args.theta:g}) = {_fmt(value, args)}  [{args.units}]")
        print(f"excess over 2 ln 2pi = {_fmt(value - 2.0 * LN_2PI, args)}")
        payload = {"command": "spin", "theta": args.theta, "theta_reduced": spec.theta_alpha, "s_pair": value}
    if args.out:
        print(f"Saved: {write_json(Path(args.out) / 'spin.json', payload, precision)}")
    return EXIT_OK


# -----------------------------
# Parser
# -----------------------------

def build_parser() -> QpseArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the experiment seed")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--precision", type=int, default=None, help="significant digits in output files (6-17)")
    common.add_argument("--units", choices=("nats", "bits"), default="nats", help="units of printed entropies")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    with_spec = argparse.ArgumentParser(add_help=False)
    with_spec.add_argument("spec", nargs="?", default=None, help="experiment spec (JSON)")
    with_spec.add_argument("--spec", dest="spec_opt", default=None, help="experiment spec (JSON)")

    parser = QpseArgumentParser(prog="qpse", description="Phase-space entropy of quantum states on grids.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    for name, fn, help_text in (
        ("entropy", cmd_entropy, "entropy report for the experiment state"),
        ("invariance", cmd_invariance, "entropy deltas under the experiment transforms"),
        ("evolve", cmd_evolve, "entropy time series under the experiment evolution"),
        ("run", cmd_run, "everything the experiment requests"),
    ):
        p = sub.add_parser(name, parents=[common, with_spec], help=help_text)
        p.set_defaults(func=fn, parser=p)

    p = sub.add_parser("verify", parents=[common], help="run the built-in check suite")
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser("spin", parents=[common], help="spin-entropy constants / entangled pair")
    p.add_argument("--theta", type=float, default=None, help="entangled-pair angle theta_alpha")
    p.set_defaults(func=cmd_spin, parser=p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        return args.func(args)
    except ValidationError as e:
        die(str(e), EXIT_VALIDATION)
    except NumericalGuard as e:
        msg = str(e)
        if not msg.startswith(e.guard):
            msg = f"{e.guard}: {msg}"
        die(msg, EXIT_GUARD)
