import os
import logging
from dotenv import load_dotenv
from typing import Optional, Tuple
from pathlib import Path

from .errors import ConfigError
from .fixtures import DEFAULT_PARAM_BOUND, DEFAULT_SEEDS

logger = logging.getLogger(__name__)

current_file_path = Path(__file__).resolve()
package_dir = current_file_path.parent  # .../poincare
local_env = package_dir / ".env"  # .../poincare/.env

if local_env.exists():
    logger.debug(f"Loading engine settings from {local_env}")
    load_dotenv(dotenv_path=local_env, override=True)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _parse_int(name: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


class EngineConfig:
    def __init__(
        self,
        seeds: Optional[Tuple[int, ...]] = None,
        param_bound: Optional[int] = None,
        log_level: Optional[str] = None,
        metrics_path: Optional[str] = None,
        jet_checks: Optional[int] = None,
    ) -> None:
        raw_seeds = os.getenv("POINCARE_SEEDS")
        if seeds is not None:
            self.SEEDS = tuple(seeds)
        elif raw_seeds:
            self.SEEDS = tuple(_parse_int("POINCARE_SEEDS", x.strip()) for x in raw_seeds.split(",") if x.strip())
        else:
            self.SEEDS = DEFAULT_SEEDS

        raw_bound = os.getenv("POINCARE_PARAM_BOUND")
        if param_bound is not None:
            self.PARAM_BOUND = param_bound
        elif raw_bound:
            self.PARAM_BOUND = _parse_int("POINCARE_PARAM_BOUND", raw_bound)
        else:
            self.PARAM_BOUND = DEFAULT_PARAM_BOUND

        self.LOG_LEVEL = (log_level or os.getenv("POINCARE_LOG_LEVEL") or "INFO").upper()
        self.METRICS_PATH = metrics_path or os.getenv("POINCARE_METRICS_PATH")

        raw_checks = os.getenv("POINCARE_JET_CHECKS")
        if jet_checks is not None:
            self.JET_CHECKS = jet_checks
        elif raw_checks:
            self.JET_CHECKS = _parse_int("POINCARE_JET_CHECKS", raw_checks)
        else:
            self.JET_CHECKS = 50

        if not self.SEEDS:
            raise ConfigError("at least one seed is required")
        if self.PARAM_BOUND < 1:
            raise ConfigError(f"POINCARE_PARAM_BOUND must be positive, got {self.PARAM_BOUND}")
        if self.LOG_LEVEL not in LOG_LEVELS:
            raise ConfigError(f"POINCARE_LOG_LEVEL must be one of {LOG_LEVELS}, got {self.LOG_LEVEL!r}")
        if self.JET_CHECKS < 1:
            raise ConfigError(f"POINCARE_JET_CHECKS must be positive, got {self.JET_CHECKS}")

        missing = []
        if not self.METRICS_PATH:
            missing.append("POINCARE_METRICS_PATH")
        if missing:
            logger.warning(f"Optional settings not provided: {', '.join(missing)}")
