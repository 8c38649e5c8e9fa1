from __future__ import annotations

import logging
import os

from dotenv import load_dotenv
from pydantic import BaseModel

from app.constants.constants import DEFAULT_SWEEP_CHUNK_SIZE, DEFAULT_SWEEP_WORKERS

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    log_level: str = "INFO"
    sweep_max_workers: int = DEFAULT_SWEEP_WORKERS
    sweep_chunk_size: int = DEFAULT_SWEEP_CHUNK_SIZE


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Invalid {name}='{raw}', falling back to {default}")
        return default
    return max(1, value)


def load_settings() -> Settings:
    load_dotenv(override=False)
    level = os.getenv("LOG_LEVEL", "INFO").upper()
    if level not in logging.getLevelNamesMapping():
        level = "INFO"
    return Settings(
        log_level=level,
        sweep_max_workers=_int_env("SWEEP_MAX_WORKERS", DEFAULT_SWEEP_WORKERS),
        sweep_chunk_size=_int_env("SWEEP_CHUNK_SIZE", DEFAULT_SWEEP_CHUNK_SIZE),
    )
