"""
04_stage_cpt_invariance.py

C, P, T and CPT applied to random 4-component spinor fields.

Outputs (DuckDB: db/qpse.duckdb)
- Table: cpt_invariance
  (field, operation, density_residual, d_s_r, d_s_k, d_s_total)

QC
- Gamma-matrix identity residuals (entrywise, should be ~0)
- Worst pointwise density residual and entropy delta per operation

Run
  python src/04_stage_cpt_invariance.py
"""

from __future__ import annotations

import sys

import duckdb

from qpse import config
from qpse.errors import QpseError
from qpse.spinor import check_gamma_algebra
from qpse.verify import cpt_invariance


SEED = config.DEFAULT_SEED
N_FIELDS = 100
TABLE = "cpt_invariance"


def die(msg: str, code: int = 1) -> None:
    print(f"[ERROR] {msg}", file=sys.stderr)
    raise SystemExit(code)


def main() -> None:
    if not config.DB_PATH.exists():
        die(f"DuckDB file not found at: {config.DB_PATH} (run 01_stage_minimum_entropy.py first)")

    print("\nGamma-matrix identities (max entrywise residual):")
    for name, value in check_gamma_algebra().items():
        print(f"  {name:<22} {value:.3e}")

    print(f"\nBuilding {TABLE} ({N_FIELDS} random fields) ...")
    try:
        df = cpt_invariance(SEED, n_fields=N_FIELDS)
    except QpseError as e:
        die(str(e))
    if df.empty:
        die(f"{TABLE} build returned 0 rows.")

    con = duckdb.connect(str(config.DB_PATH))
    try:
        con.register("cpt_df", df)
        con.execute(f"CREATE OR REPLACE TABLE {TABLE} AS SELECT * FROM cpt_df")
        print(f"Saved table: {TABLE} ({len(df):,} rows)")

        print("\nWorst residuals by operation:")
        print(con.execute(f"""
            SELECT
                operation,
                COUNT(*) AS fields,
                MAX(density_residual) AS max_density_residual,
                MAX(GREATEST(ABS(d_s_r), ABS(d_s_k), ABS(d_s_total))) AS max_entropy_delta
            FROM {TABLE}
            GROUP BY 1
            ORDER BY 1
        """).df().to_string(index=False))
    finally:
        con.close()


if __name__ == "__main__":
    main()
