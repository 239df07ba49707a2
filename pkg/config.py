import os
import random
import sys
from dotenv import load_dotenv

load_dotenv()

# --- Configuration ---
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
CONCURRENCY_LIMIT = int(os.getenv("CONCURRENCY_LIMIT", "15"))
CHECK_REWRITES = os.getenv("CHECK_REWRITES", "false").lower() == "true"
ORBIT_BIT_BUDGET = int(os.getenv("ORBIT_BIT_BUDGET", "4096"))
MODULAR_PRIME_BITS = int(os.getenv("MODULAR_PRIME_BITS", "30"))
RANDOM_SEED = os.getenv("RANDOM_SEED") or None
DEFAULT_CURVE_BOUND = int(os.getenv("DEFAULT_CURVE_BOUND", "3"))
WRITE_REPORT = os.getenv("WRITE_REPORT", "false").lower() == "true"
REPORT_DIR = os.getenv("REPORT_DIR", "reports")

_LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40}


def log(level, message):
    """Print a tagged log line to stderr when `level` passes LOG_LEVEL."""
    level = level.upper()
    if _LEVELS.get(level, 20) < _LEVELS.get(LOG_LEVEL, 20):
        return
    print(f"[{level}] {message}", file=sys.stderr)


def seeded_random():
    if RANDOM_SEED is not None:
        return random.Random(int(RANDOM_SEED))
    return random.Random()
