"""
01_stage_minimum_entropy.py

Minimum-entropy and entropic-uncertainty checks.

Outputs (DuckDB: db/qpse.duckdb)
- Table: minimum_entropy
  (label, dim, s_total, expected, abs_error)
  coherent Gaussians in 1D, 3 x 1D and on a 64^3 grid; Hermite n = 1
- Table: bbm_sweep
  (family, label, points, extent, s_r, s_k, s_total, bbm_margin)
  family in {gaussian, superposition, refinement}
- Table: two_particle_entropy
  (correlation, s_r, s_k, s_total, s_r_closed, mutual_information, mutual_information_closed)

QC
- Prints worst closed-form error per minimum-entropy row
- Prints min / max BBM margin per family (margins must be >= -1e-6)

Run
  python src/01_stage_minimum_entropy.py
"""

from __future__ import annotations

import sys

import duckdb
import pandas as pd

from qpse import config
from qpse.errors import QpseError
from qpse.verify import bbm_sweep, minimum_entropy_table, two_particle_table


SEED = config.DEFAULT_SEED
N_RANDOM = 200


def die(msg: str, code: int = 1) -> None:
    print(f"[ERROR] {msg}", file=sys.stderr)
    raise SystemExit(code)


def save_table(con: duckdb.DuckDBPyConnection, name: str, df: pd.DataFrame) -> None:
    if df.empty:
        die(f"{name} build returned 0 rows.")
    con.register(f"{name}_df", df)
    con.execute(f"CREATE OR REPLACE TABLE {name} AS SELECT * FROM {name}_df")
    con.unregister(f"{name}_df")
    print(f"Saved table: {name} ({len(df):,} rows)")


def main() -> None:
    config.DB_PATH.parent.mkdir(parents=True, exist_ok=True)
    con = duckdb.connect(str(config.DB_PATH))
    try:
        print("\nBuilding minimum_entropy ...")
        try:
            minimum = minimum_entropy_table()
            print("\nBuilding bbm_sweep ...")
            sweep = bbm_sweep(SEED, n_random=N_RANDOM)
            print("\nBuilding two_particle_entropy ...")
            pairs = two_particle_table()
        except QpseError as e:
            die(str(e))

        save_table(con, "minimum_entropy", minimum)
        save_table(con, "bbm_sweep", sweep)
        save_table(con, "two_particle_entropy", pairs)

        print("\nClosed-form errors:")
        print(con.execute("""
            SELECT label, dim, s_total, expected, abs_error
            FROM minimum_entropy
            ORDER BY label
        """).df().to_string(index=False))

        print("\nBBM margins by family (should be >= -1e-6):")
        print(con.execute("""
            SELECT
                family,
                COUNT(*) AS rows,
                MIN(bbm_margin) AS min_margin,
                MAX(bbm_margin) AS max_margin
            FROM bbm_sweep
            GROUP BY 1
            ORDER BY 1
        """).df().to_string(index=False))

        n_bad = con.execute(f"""
            SELECT COUNT(*) FROM bbm_sweep WHERE bbm_margin < -{config.BBM_SLACK}
        """).fetchone()[0]
        if n_bad:
            die(f"{n_bad} states violate the entropic uncertainty bound")
    finally:
        con.close()


if __name__ == "__main__":
    main()
