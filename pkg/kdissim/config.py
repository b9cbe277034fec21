"""Configuration from /etc/default/kdissim, KDISSIM_* variables and CLI options."""

import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field

import psutil
from dotenv import dotenv_values

from kdissim.lp import BACKENDS

DEFAULT_CONFIG_PATH = "/etc/default/kdissim"
ENV_PREFIX = "KDISSIM_"
VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _default_workers() -> int:
    """Physical core count, or 1 when it cannot be determined."""
    try:
        cores = psutil.cpu_count(logical=False)
    except (OSError, RuntimeError):
        cores = None
    return cores if cores else 1


@dataclass
class Config:
    """Solver and experiment settings."""

    time_limit_ms: int = 300_000
    workers: int = field(default_factory=_default_workers)
    alpha: float = 1.0
    lp_backend: str = "highs"
    path_cap: int = 5000
    multiset_cap: int = 10**7
    log_level: str = "WARNING"
    debug: bool = False

    def __post_init__(self) -> None:
        if self.time_limit_ms <= 0:
            raise ValueError(f"Time limit must be positive, got {self.time_limit_ms}")

        if self.workers < 1:
            raise ValueError(f"Worker count must be at least 1, got {self.workers}")

        if self.alpha < 0:
            raise ValueError(f"Penalty alpha must be non-negative, got {self.alpha}")

        if self.lp_backend not in BACKENDS:
            raise ValueError(
                f"Invalid LP backend '{self.lp_backend}'. Must be one of: {', '.join(BACKENDS)}"
            )

        if self.path_cap < 1 or self.multiset_cap < 1:
            raise ValueError(
                f"Oracle caps must be positive, got {self.path_cap} and {self.multiset_cap}"
            )

        if self.log_level not in VALID_LOG_LEVELS:
            raise ValueError(
                f"Invalid log level '{self.log_level}'. "
                f"Must be one of: {', '.join(VALID_LOG_LEVELS)}"
            )

        if self.debug:
            self.log_level = "DEBUG"

    @classmethod
    def load(cls, overrides: Mapping[str, object] | None = None) -> "Config":
        """Load configuration from the defaults file, env vars and CLI overrides.

        Priority (highest to lowest):
        1. CLI overrides (entries set to None are ignored)
        2. KDISSIM_* environment variables
        3. /etc/default/kdissim file
        4. Dataclass defaults
        """
        file_env = {k: v for k, v in dotenv_values(DEFAULT_CONFIG_PATH).items() if v is not None}

        def env(key: str) -> str | None:
            name = ENV_PREFIX + key
            if name in os.environ:
                return os.environ[name]
            return file_env.get(name)

        kwargs: dict[str, object] = {}

        for key, attr, convert in (
            ("TIME_LIMIT_MS", "time_limit_ms", int),
            ("WORKERS", "workers", int),
            ("ALPHA", "alpha", float),
            ("PATH_CAP", "path_cap", int),
            ("MULTISET_CAP", "multiset_cap", int),
        ):
            if (v := env(key)) is not None:
                try:
                    kwargs[attr] = convert(v)
                except ValueError:
                    pass

        if (v := env("LP_BACKEND")) is not None:
            kwargs["lp_backend"] = v.lower()

        if (v := env("LOG_LEVEL")) is not None:
            kwargs["log_level"] = v.upper()

        if (v := env("DEBUG")) is not None:
            kwargs["debug"] = v.lower() in ("true", "1", "yes")

        # CLI overrides win
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key == "debug" and value is not True:
                continue
            kwargs[key] = value

        return cls(**kwargs)  # type: ignore[arg-type]

    def setup_logging(self) -> None:
        """Configure logging on stderr based on this config."""
        logging.basicConfig(
            level=getattr(logging, self.log_level),
            format="[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
