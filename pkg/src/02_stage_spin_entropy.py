"""
02_stage_spin_entropy.py

Spin-entropy constants, the azimuthal-entropy sweep and the entangled-pair curve.

Outputs (DuckDB: db/qpse.duckdb)
- Table: spin_entropy_curve (theta, s_pair, s_mirror)
- Table: azimuthal_sweep (draw, alpha_up_abs2, s_phi)

QC
- Prints S_spin for s = 0 and s = 1/2
- Prints the largest azimuthal entropy over the draws (must not exceed ln 2pi)
- Prints the mirror asymmetry of the curve

Run
  python src/02_stage_spin_entropy.py
"""

from __future__ import annotations

import math
import sys

import duckdb
import pandas as pd

from qpse import config
from qpse.errors import QpseError
from qpse.spin import LN_2PI, spin_entropy_entangled_pair, spin_entropy_single
from qpse.verify import azimuthal_sweep, entangled_curve


SEED = config.DEFAULT_SEED
N_DRAWS = 500
N_THETA = 100


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
    if not config.DB_PATH.exists():
        die(f"DuckDB file not found at: {config.DB_PATH} (run 01_stage_minimum_entropy.py first)")

    print(f"S_spin(s=0)   = {spin_entropy_single(0):.12f}")
    print(f"S_spin(s=1/2) = {spin_entropy_single(0.5):.12f}  (ln 2pi = {LN_2PI:.12f})")

    try:
        curve = entangled_curve(N_THETA)
        sweep = azimuthal_sweep(SEED, n_draws=N_DRAWS)
    except QpseError as e:
        die(str(e))

    con = duckdb.connect(str(config.DB_PATH))
    try:
        save_table(con, "spin_entropy_curve", curve)
        save_table(con, "azimuthal_sweep", sweep)

        qa = con.execute("""
            SELECT
                MAX(ABS(s_pair - s_mirror)) AS mirror_asymmetry,
                MIN(s_pair) AS min_s_pair,
                MAX(s_pair) AS max_s_pair
            FROM spin_entropy_curve
        """).df()
        print("\nEntangled-pair curve:")
        print(qa.to_string(index=False))

        s_max = con.execute("SELECT MAX(s_phi) FROM azimuthal_sweep").fetchone()[0]
        print(f"\nLargest azimuthal entropy over {N_DRAWS} draws: {s_max:.12f} (bound {LN_2PI:.12f})")
        if s_max > LN_2PI + 1e-10:
            die("azimuthal entropy exceeds ln 2pi")
        print(f"Pair value at pi/4: {spin_entropy_entangled_pair(math.pi / 4):.9f}")
    finally:
        con.close()


if __name__ == "__main__":
    main()
