"""
Configuration file for the toolkit.
Resource limits are read from the environment (or a `.env` file in the
project root) and can be overridden per call or per CLI invocation.
"""
import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    return int(raw) if raw else default


def _env_float(name: str) -> Optional[float]:
    raw = os.environ.get(name, "").strip()
    return float(raw) if raw else None


# Largest window (number of integers) any operation may materialize
MAX_WINDOW = _env_int("HYPERCOMB_MAX_WINDOW", 10 ** 7)

# Node budget for the avoiding-coloring backtracking search
MAX_SEARCH_NODES = _env_int("HYPERCOMB_MAX_SEARCH_NODES", 10 ** 8)

# Wall-clock budget in seconds; unset means unlimited
TIME_BUDGET = _env_float("HYPERCOMB_TIME_BUDGET")

# Worker threads for the parallelizable scans (--threads overrides)
THREADS = _env_int("HYPERCOMB_THREADS", 1)

# Largest leading coefficient the injective-PR solver will accept
COEFF_SCAN_BOUND = _env_int("HYPERCOMB_COEFF_SCAN_BOUND", 10 ** 6)

# States the string-closure oracle may visit before giving up
ORACLE_STATE_LIMIT = _env_int("HYPERCOMB_ORACLE_STATE_LIMIT", 10 ** 6)

LOG_LEVEL = os.environ.get("HYPERCOMB_LOG_LEVEL", "WARNING").upper()


@dataclass(frozen=True)
class Limits:
    max_window: int = MAX_WINDOW
    max_search_nodes: int = MAX_SEARCH_NODES
    time_budget: Optional[float] = TIME_BUDGET
    threads: int = THREADS
    coeff_scan_bound: int = COEFF_SCAN_BOUND
    oracle_state_limit: int = ORACLE_STATE_LIMIT

    def as_dict(self) -> dict:
        return {
            "max_window": self.max_window,
            "max_search_nodes": self.max_search_nodes,
            "time_budget": self.time_budget,
            "threads": self.threads,
            "coeff_scan_bound": self.coeff_scan_bound,
            "oracle_state_limit": self.oracle_state_limit,
        }


DEFAULT_LIMITS = Limits()


def load_limits(**overrides) -> Limits:
    """
    Build the effective limits: environment defaults with explicit overrides.

    Args:
        overrides: Limits fields; None values are ignored

    Returns:
        Limits
    """
    given = {k: v for k, v in overrides.items() if v is not None}
    limits = replace(DEFAULT_LIMITS, **given)
    if limits.threads < 1:
        limits = replace(limits, threads=1)
    return limits
