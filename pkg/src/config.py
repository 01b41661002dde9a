"""
Configuration management

"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load .env file from project root
load_dotenv()

# Dataset cache (LIBSVM files), optional
_data_dir = os.getenv("NYSTROMITE_DATA_DIR", "")
NYSTROMITE_DATA_DIR: Optional[Path] = Path(_data_dir) if _data_dir else None

# Bench Configuration
NYSTROMITE_OUTPUT_DIR: Path = Path(os.getenv("NYSTROMITE_OUTPUT_DIR", "results"))
NYSTROMITE_LOG_LEVEL: str = os.getenv("NYSTROMITE_LOG_LEVEL", "INFO").upper()
NYSTROMITE_SEED: int = int(os.getenv("NYSTROMITE_SEED", "0"))
NYSTROMITE_TRIALS: int = int(os.getenv("NYSTROMITE_TRIALS", "20"))
NYSTROMITE_WORKERS: int = int(os.getenv("NYSTROMITE_WORKERS", "1"))

# Validation
if NYSTROMITE_DATA_DIR is not None and not NYSTROMITE_DATA_DIR.exists():
    raise ValueError(
        f"NYSTROMITE_DATA_DIR does not exist: {NYSTROMITE_DATA_DIR}\n"
        f"Please create the dataset directory or unset NYSTROMITE_DATA_DIR in .env"
    )

if NYSTROMITE_TRIALS < 1:
    raise ValueError(f"NYSTROMITE_TRIALS must be >= 1, got {NYSTROMITE_TRIALS}")

if NYSTROMITE_WORKERS < 1:
    raise ValueError(f"NYSTROMITE_WORKERS must be >= 1, got {NYSTROMITE_WORKERS}")


def get_config_summary() -> dict:
    """Return configuration summary (safe for logging)."""
    return {
        "NYSTROMITE_DATA_DIR": str(NYSTROMITE_DATA_DIR) if NYSTROMITE_DATA_DIR else "(not set)",
        "NYSTROMITE_OUTPUT_DIR": str(NYSTROMITE_OUTPUT_DIR),
        "NYSTROMITE_LOG_LEVEL": NYSTROMITE_LOG_LEVEL,
        "NYSTROMITE_SEED": NYSTROMITE_SEED,
        "NYSTROMITE_TRIALS": NYSTROMITE_TRIALS,
        "NYSTROMITE_WORKERS": NYSTROMITE_WORKERS,
    }
