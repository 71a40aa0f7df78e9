"""
03_stage_frame_invariance.py

Entropy deltas under translations, momentum boosts and dilations.

Outputs (DuckDB: db/qpse.duckdb)
- Table: frame_invariance
  (family, case_id, kind, amount, d_s_r, d_s_k, d_s_total, expected_d_s_r, expected_d_s_k)

QC
- Worst |dS - expected| per family and kind (grid-step shifts of
  superpositions and fractional shifts of coherent states < 1e-8,
  dilation dS_r = ln a, dS_k = -ln a)

Run
  python src/03_stage_frame_invariance.py
"""

from __future__ import annotations

import sys

import duckdb

from qpse import config
from qpse.errors import QpseError
from qpse.verify import frame_invariance


SEED = config.DEFAULT_SEED
N_CASES = 100
TABLE = "frame_invariance"


def die(msg: str, code: int = 1) -> None:
    print(f"[ERROR] {msg}", file=sys.stderr)
    raise SystemExit(code)


def main() -> None:
    if not config.DB_PATH.exists():
        die(f"DuckDB file not found at: {config.DB_PATH} (run 01_stage_minimum_entropy.py first)")

    print(f"\nBuilding {TABLE} ({N_CASES} grid-step + {N_CASES} fractional cases + dilation ladder) ...")
    try:
        df = frame_invariance(SEED, n_cases=N_CASES)
    except QpseError as e:
        die(str(e))
    if df.empty:
        die(f"{TABLE} build returned 0 rows.")

    con = duckdb.connect(str(config.DB_PATH))
    try:
        con.register("frame_df", df)
        con.execute(f"CREATE OR REPLACE TABLE {TABLE} AS SELECT * FROM frame_df")
        print(f"Saved table: {TABLE} ({len(df):,} rows)")

        print("\nWorst deviation by family and kind:")
        print(con.execute(f"""
            SELECT
                family,
                kind,
                COUNT(*) AS rows,
                MAX(ABS(d_s_r - expected_d_s_r)) AS max_err_s_r,
                MAX(ABS(d_s_k - expected_d_s_k)) AS max_err_s_k,
                MAX(ABS(d_s_total)) AS max_abs_d_s_total
            FROM {TABLE}
            GROUP BY 1, 2
            ORDER BY 1, 2
        """).df().to_string(index=False))
    finally:
        con.close()


if __name__ == "__main__":
    main()
