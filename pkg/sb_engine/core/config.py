"""Environment configuration."""
import logging
import os

from dotenv import load_dotenv

from .errors import SBError

# Load environment variables
load_dotenv()

DEFAULT_STEP_BUDGET = 10_000
DEFAULT_DOT_WINDOW = 64
DEFAULT_DECOMPOSE_WINDOW = 64


def _positive_int(name: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise SBError(f"{name} must be a positive integer", raw) from None
    if value < 1:
        raise SBError(f"{name} must be a positive integer", raw)
    return value


def budget_override() -> int | None:
    """
    Get the step budget override from SB_BUDGET.

    Read on every call so commands pick up the current environment.

    Returns:
        The override, or None when SB_BUDGET is unset

    Raises:
        SBError: If SB_BUDGET is not a positive integer
    """
    raw = os.getenv("SB_BUDGET")
    if raw is None or raw == "":
        return None
    return _positive_int("SB_BUDGET", raw)


def dot_window() -> int:
    """Get the default DOT rendering window from SB_DOT_WINDOW."""
    raw = os.getenv("SB_DOT_WINDOW")
    if not raw:
        return DEFAULT_DOT_WINDOW
    return _positive_int("SB_DOT_WINDOW", raw)


def log_level() -> str:
    """
    Get the CLI logging level name from SB_LOG_LEVEL.

    Raises:
        SBError: If SB_LOG_LEVEL is not a logging level name
    """
    raw = os.getenv("SB_LOG_LEVEL") or "WARNING"
    level = raw.upper()
    if not isinstance(logging.getLevelName(level), int):
        raise SBError("SB_LOG_LEVEL must be a logging level name", raw)
    return level
