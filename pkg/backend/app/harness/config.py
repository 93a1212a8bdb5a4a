"""Run configuration.

A run file groups one block per component; every block may be omitted and then
takes the shipped defaults::

    {
      "train_scenario": "scenarios/oval_train.json",
      "eval_scenarios": ["scenarios/close_opponent.json"],
      "vehicle": {"v_max": 20},
      "agent": {"actor_hidden": [64, 32]},
      "apf": {"eta": 1.5, "k_fx": 20, "k_fy": 10},
      "tracking": {"eta1": 3.18, "eta2": 2},
      "fusion": {"alpha": 0.4, "beta": 0.3, "lambda": 0.3},
      "run": {"episodes": 200, "max_steps": 500, "dt": 0.02, "seed": 0}
    }

Scenario paths are relative to the run file.
"""

import logging
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from app.apf import ApfParams
from app.ddpg import AgentConfig
from app.errors import ConfigurationError
from app.fusion import FusionWeights
from app.sim import VehicleParams
from app.tracking import TrackingParams

logger = logging.getLogger(__name__)


class RunBlock(BaseModel):
    episodes: int = Field(200, ge=0, description="Training episodes")
    max_steps: int = Field(500, gt=0, description="Step budget of a training episode")
    eval_max_steps: int = Field(2000, gt=0, description="Step budget of an evaluation episode")
    eval_episodes: int = Field(1, gt=0, description="Evaluation episodes per scenario and mode")
    dt: float = Field(0.02, gt=0, description="Integration step, seconds")
    seed: int = Field(0, ge=0, lt=2**64, description="Master seed every random stream is split from")
    rolling_window: int = Field(20, gt=0, description="Episodes averaged by the rolling mean Q")
    out_dir: Path | None = Field(None, description="Output directory; --out and RACING_OUT_DIR apply when unset")


class RunConfig(BaseModel):
    train_scenario: Path
    eval_scenarios: list[Path] = []
    vehicle: VehicleParams = VehicleParams()
    agent: AgentConfig = AgentConfig()
    apf: ApfParams = ApfParams()
    tracking: TrackingParams = TrackingParams()
    fusion: FusionWeights = FusionWeights()
    run: RunBlock = RunBlock()

    def with_seed(self, seed: int | None) -> "RunConfig":
        if seed is None:
            return self
        try:
            run = RunBlock.model_validate({**self.run.model_dump(), "seed": seed})
        except ValidationError as e:
            raise ConfigurationError(f"invalid seed {seed}: {e}") from e
        return self.model_copy(update={"run": run})


def load_run_config(path: Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read {path}: {e}") from e
    try:
        cfg = RunConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigurationError(f"invalid {path}: {e}") from e

    base = path.parent
    cfg = cfg.model_copy(
        update={
            "train_scenario": base / cfg.train_scenario,
            "eval_scenarios": [base / p for p in cfg.eval_scenarios],
        }
    )
    for scenario in [cfg.train_scenario, *cfg.eval_scenarios]:
        if not scenario.is_file():
            raise ConfigurationError(f"{path} refers to missing scenario {scenario}")
    logger.debug("Loaded run config %s (seed %d)", path, cfg.run.seed)
    return cfg
