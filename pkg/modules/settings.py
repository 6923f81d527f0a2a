"""
Settings Module
Provides environment-driven configuration for the closure engine.
"""

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

from modules.error_handler import ConfigError

logger = logging.getLogger(__name__)

ORDERS = ("lex", "grevlex")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    """Runtime configuration read from the environment"""

    log_level: str = "INFO"
    log_file: Optional[str] = None
    groebner_max_basis: int = 5000
    default_order: str = "grevlex"
    default_verify_k: int = 0
    slow_stage_seconds: float = 1.0

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from os.environ (after .env has been loaded)"""
        log_level = os.getenv('LOG_LEVEL', 'INFO').upper()
        if log_level not in LOG_LEVELS:
            raise ConfigError(f"LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got {log_level}")

        default_order = os.getenv('DEFAULT_ORDER', 'grevlex').lower()
        if default_order not in ORDERS:
            raise ConfigError(f"DEFAULT_ORDER must be lex or grevlex, got {default_order}")

        return cls(
            log_level=log_level,
            log_file=os.getenv('LOG_FILE') or None,
            groebner_max_basis=_int_env('GROEBNER_MAX_BASIS', 5000, minimum=1),
            default_order=default_order,
            default_verify_k=_int_env('DEFAULT_VERIFY_K', 0, minimum=0),
            slow_stage_seconds=_float_env('SLOW_STAGE_SECONDS', 1.0),
        )


def _int_env(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}")
    if value <= 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load .env once and return the cached settings"""
    load_dotenv()
    settings = Settings.from_env()
    logger.debug(f"Loaded settings: {settings}")
    return settings
