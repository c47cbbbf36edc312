import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"

_TRUE = {"1", "true", "yes", "on"}


def _flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in _TRUE


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    max_steps: int = 4
    check_complexes: bool = True
    default_mode: str = "streaming"
    stable_reports: bool = False
    secret_key: str = "locoh-dev"

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            log_level=os.getenv("LOCOH_LOG_LEVEL", "WARNING").upper(),
            max_steps=int(os.getenv("LOCOH_MAX_STEPS", "4")),
            check_complexes=_flag("LOCOH_CHECK_COMPLEXES", True),
            default_mode=os.getenv("LOCOH_DEFAULT_MODE", "streaming").lower(),
            stable_reports=_flag("LOCOH_STABLE_REPORTS", False),
            secret_key=os.getenv("FLASK_SECRET_KEY", "locoh-dev"),
        )


settings = Settings.from_env()


def configure_logging(level: str | int | None = None) -> None:
    level = level or settings.log_level
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
