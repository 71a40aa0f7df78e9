"""
07_export_report_artifacts.py

Exports every pipeline table from DuckDB to reports/tables as CSV, so the
results can be reviewed (or plotted externally) without re-running the pipeline.

Inputs (DuckDB)
- minimum_entropy, bbm_sweep, two_particle_entropy (required)
- spin_entropy_curve, azimuthal_sweep, frame_invariance, cpt_invariance,
  lorentz_measure, entropy_series_free, entropy_series_harmonic (required)

Outputs (CSV -> reports/tables/)
- <table>.csv for each table above, floats at 12 significant digits
- summary.csv: one row per table with its row count

Run
  python src/07_export_report_artifacts.py
"""

from __future__ import annotations

import sys

import duckdb
import pandas as pd

from qpse import config
from qpse.report import write_csv


TABLES = [
    "minimum_entropy",
    "bbm_sweep",
    "two_particle_entropy",
    "spin_entropy_curve",
    "azimuthal_sweep",
    "frame_invariance",
    "cpt_invariance",
    "lorentz_measure",
    "entropy_series_free",
    "entropy_series_harmonic",
]
PRECISION = 12


def die(msg: str, code: int = 1) -> None:
    print(f"[ERROR] {msg}", file=sys.stderr)
    raise SystemExit(code)


def export_df(df: pd.DataFrame, filename: str) -> None:
    out_path = write_csv(config.TABLES_DIR / filename, df, PRECISION)
    print(f"Saved: {out_path} ({len(df):,} rows)")


def main() -> None:
    print(f"Connecting to DuckDB: {config.DB_PATH}")
    if not config.DB_PATH.exists():
        die(f"DuckDB file not found at: {config.DB_PATH}")

    con = duckdb.connect(str(config.DB_PATH), read_only=True)
    try:
        tables = {r[0] for r in con.execute("SHOW TABLES").fetchall()}
        missing = [t for t in TABLES if t not in tables]
        if missing:
            die(f"Required tables missing: {missing}")

        summary = []
        for name in TABLES:
            df = con.execute(f"SELECT * FROM {name}").df()
            export_df(df, f"{name}.csv")
            summary.append({"table": name, "rows": len(df)})
        export_df(pd.DataFrame(summary), "summary.csv")
    finally:
        con.close()


if __name__ == "__main__":
    main()
