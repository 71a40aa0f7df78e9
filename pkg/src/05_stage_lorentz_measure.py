"""
05_stage_lorentz_measure.py

Invariance of the momentum measure dk / w_k under 1D boosts.

Outputs (DuckDB: db/qpse.duckdb)
- Table: lorentz_measure (rapidity, mass, measure_residual, boosted_probability)

QC
- Prints the full rapidity x mass grid (|I - I'| < 1e-8, probability 1 within 1e-8)

Run
  python src/05_stage_lorentz_measure.py
"""

from __future__ import annotations

import sys

import duckdb

from qpse import config
from qpse.errors import QpseError
from qpse.verify import lorentz_measure


TABLE = "lorentz_measure"


def die(msg: str, code: int = 1) -> None:
    print(f"[ERROR] {msg}", file=sys.stderr)
    raise SystemExit(code)


def main() -> None:
    if not config.DB_PATH.exists():
        die(f"DuckDB file not found at: {config.DB_PATH} (run 01_stage_minimum_entropy.py first)")

    print(f"\nBuilding {TABLE} ...")
    try:
        df = lorentz_measure()
    except QpseError as e:
        die(str(e))

    con = duckdb.connect(str(config.DB_PATH))
    try:
        con.register("lorentz_df", df)
        con.execute(f"CREATE OR REPLACE TABLE {TABLE} AS SELECT * FROM lorentz_df")
        print(f"Saved table: {TABLE} ({len(df):,} rows)")

        print(con.execute(f"""
            SELECT rapidity, mass, measure_residual, boosted_probability - 1.0 AS probability_error
            FROM {TABLE}
            ORDER BY rapidity, mass
        """).df().to_string(index=False))
    finally:
        con.close()


if __name__ == "__main__":
    main()
