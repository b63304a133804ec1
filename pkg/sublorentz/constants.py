"""
Constants for the sublorentz package.

Values marked as overridable are read from the environment (or a `.env` file
next to this module) so that check runs can be tuned without code changes.
"""

import os
from dotenv import load_dotenv

current_dir = os.path.dirname(os.path.abspath(__file__))
dotenv_path = os.path.join(current_dir, '.env')
load_dotenv(dotenv_path)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name}={raw!r} is not a real number")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name}={raw!r} is not an integer")


TOOL_NAME = "sublorentz"
VERSION = "0.3.0"
PROJECT_NAME = "sublorentz"

# ======= overridable settings =======
DEFAULT_SEED = _env_int("SUBLORENTZ_SEED", 11711)
BOUNDARY_RTOL = _env_float("SUBLORENTZ_BOUNDARY_RTOL", 1e-10)
NUM_WORKERS = _env_int("SUBLORENTZ_NUM_WORKERS", min(32, os.cpu_count() or 1))
OUT_DIR = os.getenv("SUBLORENTZ_OUT_DIR") or os.path.join(current_dir, "out")
CHECKS_DB_PATH = os.path.join(OUT_DIR, "checks.db")

# ======= numerical thresholds =======
# series branches
SINH_TAIL_SERIES_SWITCH = 0.5       # |u| below which (sinh u - u)/u^3 uses its series
SINHC_SQ_SERIES_SWITCH = 1e-4       # |w| below which sinh(w)^2/w^2 uses its series
BETA_SERIES_SWITCH = 1e-8           # |w| below which beta uses 6w + 28.8 w^3
EXCESS_SERIES_SWITCH = 1e-3         # |c| below which f(z) - 4|z| uses its series

# solver tolerances
BETA_ABS_TOL = 1e-14
BETA_REL_TOL = 1e-12
BRACKET_MAX_DOUBLINGS = 64
ROOT_XTOL = 1e-300
ROOT_MAXITER = 400

# distance
BEAK_CLAMP_MARGIN = 1e-13           # |w| beyond 1/4 - margin is clamped
LARGE_P_SWITCH = 20.0               # |p| beyond which p/sinh p uses exponentials

# oracle
ORACLE_DEFAULT_PIECES = 32
ORACLE_DEFAULT_STARTS = 6
ORACLE_DEFAULT_ITERS = 500
ORACLE_DEFAULT_TOL = 1e-7
ORACLE_PENALTY_WEIGHTS = (1e2, 1e4, 1e6, 1e8)
