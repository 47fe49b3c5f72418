"""
config.py

Configuration module that loads environment variables and sets up paths,
experiment defaults, and the algorithm constants shared by the forecasters.
"""

import math
import os
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

# Directory setup
PACKAGE_DIR = Path(__file__).parent  # ell1reg folder
PROJECT_DIR = PACKAGE_DIR.parent
ENV_FILE = PROJECT_DIR / ".env"
LOGS_DIR = PROJECT_DIR / "logs"

# Load environment variables from the project directory
load_dotenv(ENV_FILE)

DATA_DIR = Path(os.getenv("ELL1_DATA_DIR", PROJECT_DIR / "data"))

# Runtime configuration
ELL1_THREADS = int(os.getenv("ELL1_THREADS") or os.cpu_count() or 1)
LOG_LEVEL = os.getenv("ELL1_LOG_LEVEL", "INFO").upper()

# Artifact paths
CSV_TRACE = DATA_DIR / "trace.csv"
CSV_SWEEP = DATA_DIR / "sweep_kappa.csv"
CSV_STREAM = DATA_DIR / "stream.csv"
CSV_VERIFY = DATA_DIR / "verify.csv"
SUMMARY_TEXT = DATA_DIR / "summary.txt"
SUMMARY_JSON = DATA_DIR / "summary.json"

# 17 significant digits round-trips every double
FLOAT_FORMAT = "%.17g"

# Self-confident tuning constant C = sqrt(2(sqrt2 - 1)/(e - 2))
C_ETA = math.sqrt(2.0 * (math.sqrt(2.0) - 1.0) / (math.e - 2.0))

# LEG regret constants (square loss, no quadratic inequality)
REMARK1_C1 = 8.0 * (math.sqrt(2.0) + 1.0)
REMARK1_C2 = 4.0 * (1.0 + 1.0 / math.sqrt(2.0)) ** 2

# Scaling algorithm constants certified for LEG sub-algorithms
REMARK2_C = 9.0 * REMARK1_C1
REMARK2_C_PRIME = REMARK1_C2

# Fully adaptive grid exponent (must exceed 1)
DEFAULT_K = 2.0

# Maurey grid and comparator limits
GRID_CAP = 2_000_000
COMPARATOR_MAX_ITER = 100_000
COMPARATOR_REL_TOL = 1e-9

# Default envelope multiplier for the fully adaptive soft check
FULLY_ADAPTIVE_KAPPA = 4.0


def load_spec_file(path):
    """Read a `key = value` experiment file into a dict with flag-style keys.

    Keys are normalised to argparse destinations (`sweep-kappa` -> `sweep_kappa`);
    empty values are dropped so that command-line defaults still apply.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Spec file not found: {path}")

    values = dotenv_values(path)
    return {
        key.strip().lstrip("-").replace("-", "_"): value.strip()
        for key, value in values.items()
        if value is not None and value.strip() != ""
    }
