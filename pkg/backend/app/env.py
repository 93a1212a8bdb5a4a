"""Usage:

from app.env import Mode, load_settings, mode

if mode == Mode.PROD:
    print("Running as the deployed controller service")
else:
    print(f"Writing runs to {load_settings().out_dir}")
"""

import logging
import os
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field


class Mode(str, Enum):
    DEV = "development"
    PROD = "production"


class Settings(BaseModel):
    log_level: str = Field("INFO", description="Root log level for CLI runs and the service")
    out_dir: Path = Field(Path("runs"), description="Default output directory when --out is omitted")
    checkpoint: Path | None = Field(None, description="Agent checkpoint served by the controller API")
    actor_seed: int = Field(0, description="Seed of the fresh actor served when no checkpoint is set")


def load_settings() -> Settings:
    env = os.environ
    return Settings(
        log_level=env.get("RACING_LOG_LEVEL", "INFO"),
        out_dir=Path(env.get("RACING_OUT_DIR", "runs")),
        checkpoint=Path(env["RACING_CHECKPOINT"]) if env.get("RACING_CHECKPOINT") else None,
        actor_seed=int(env.get("RACING_ACTOR_SEED", "0")),
    )


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(
        level=(level or load_settings().log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


mode = Mode.PROD if os.environ.get("RACING_SERVICE_TYPE") == "prodx" else Mode.DEV

__all__ = [
    "Mode",
    "mode",
    "Settings",
    "load_settings",
    "configure_logging",
]
