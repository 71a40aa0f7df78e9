"""
06_stage_entropy_dynamics.py

Entropy-vs-time series under split-step evolution.

Outputs (DuckDB: db/qpse.duckdb)
- Table: entropy_series_free
  (t, s_r, s_k, s_total, bbm_margin, norm_residual, s_r_closed)
  free Gaussian sigma0 = 1 up to t = 2
- Table: entropy_series_harmonic
  (t, s_r, s_k, s_total, bbm_margin, norm_residual)
  omega = 1 coherent state displaced by x0 = 2, one period

Notes
- The S_total trend (number of decreasing steps, largest decrease) is printed
  for information only; it is not a pass/fail criterion.

Run
  python src/06_stage_entropy_dynamics.py
"""

from __future__ import annotations

import sys

import duckdb
import pandas as pd

from qpse import config
from qpse.entropy import LN_E_PI
from qpse.errors import QpseError
from qpse.verify import free_series, harmonic_series


def die(msg: str, code: int = 1) -> None:
    print(f"[ERROR] {msg}", file=sys.stderr)
    raise SystemExit(code)


def save_series(con: duckdb.DuckDBPyConnection, name: str, df: pd.DataFrame) -> None:
    if df.empty:
        die(f"{name} build returned 0 rows.")
    con.register(f"{name}_df", df)
    con.execute(f"CREATE OR REPLACE TABLE {name} AS SELECT * FROM {name}_df")
    con.unregister(f"{name}_df")
    print(f"Saved table: {name} ({len(df):,} rows)")
    if "n_decreasing" in df.attrs:
        print(f"  S_total decreasing steps: {df.attrs['n_decreasing']}  "
              f"max decrease: {df.attrs['max_decrease']:.3e}")


def main() -> None:
    if not config.DB_PATH.exists():
        die(f"DuckDB file not found at: {config.DB_PATH} (run 01_stage_minimum_entropy.py first)")

    try:
        print("\nEvolving free Gaussian ...")
        free = free_series()
        print("Evolving harmonic coherent state ...")
        harm = harmonic_series()
    except QpseError as e:
        die(str(e))

    con = duckdb.connect(str(config.DB_PATH))
    try:
        save_series(con, "entropy_series_free", free)
        save_series(con, "entropy_series_harmonic", harm)

        print("\nFree Gaussian vs closed form:")
        print(con.execute("""
            SELECT t, s_r, s_r_closed, ABS(s_r - s_r_closed) AS abs_error, s_k
            FROM entropy_series_free
            ORDER BY t
        """).df().to_string(index=False))

        print("\nHarmonic coherent state (S_total should stay at 1 + ln pi):")
        print(con.execute(f"""
            SELECT
                COUNT(*) AS rows,
                MAX(ABS(s_total - {LN_E_PI!r})) AS max_deviation,
                MAX(norm_residual) AS max_norm_residual
            FROM entropy_series_harmonic
        """).df().to_string(index=False))
    finally:
        con.close()


if __name__ == "__main__":
    main()
