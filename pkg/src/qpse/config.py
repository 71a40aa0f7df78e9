"""
config.py

Paths, tolerances and runtime knobs shared by the library, the CLI and the
numbered pipeline stages.

Environment
- QPSE_THREADS: caps FFT worker threads (default: os.cpu_count()).
"""

from __future__ import annotations

import logging
import os
from pathlib import Path


logger = logging.getLogger(__name__)


# --- Paths ---
BASE_DIR = Path(__file__).resolve().parents[2]
DB_PATH = BASE_DIR / "db" / "qpse.duckdb"
REPORTS_DIR = BASE_DIR / "reports"
TABLES_DIR = REPORTS_DIR / "tables"


# --- Tolerances ---
NORM_TOL = 1e-10          # unit mass after normalize()
NORMALIZED_TOL = 1e-8     # precondition slack for "psi normalized"
ZERO_MASS = 1e-250        # below this the state has no mass to rescale
RHO_FLOOR = 1e-300        # 0 ln 0 = 0 below this density
EDGE_AMPLITUDE_TOL = 1e-12
EDGE_MASS_ABORT = 1e-8    # dynamics aborts above this wraparound mass
ALIAS_MASS_TOL = 1e-12    # k-mass allowed in the outer 10% of the band
BBM_SLACK = 1e-6
REFINEMENT_TOL = 1e-5    # quadrature drift of the margin between N and 2N points


# --- Defaults ---
DEFAULT_SEED = 42
PHI_POINTS = 2**12
MIN_POINTS = 8


def fft_workers() -> int:
    """Worker count for scipy.fft, capped by QPSE_THREADS."""
    default = os.cpu_count() or 1
    raw = os.environ.get("QPSE_THREADS")
    if raw is None or raw.strip() == "":
        return default
    try:
        n = int(raw)
    except ValueError:
        logger.warning("Ignoring QPSE_THREADS=%r (not an integer)", raw)
        return default
    if n < 1:
        logger.warning("Ignoring QPSE_THREADS=%r (must be >= 1)", raw)
        return default
    return n
