from pathlib import Path

import pytest

from app.ddpg import AgentConfig
from app.harness import RunBlock, RunConfig
from app.sim import VehicleParams, straight_track

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


@pytest.fixture
def params() -> VehicleParams:
    return VehicleParams()


@pytest.fixture
def straight():
    return straight_track(200.0, 6.0)


@pytest.fixture
def small_run() -> RunConfig:
    """A run small enough to train and evaluate in a couple of seconds."""
    return RunConfig(
        train_scenario=CONFIGS / "scenarios" / "oval_train.json",
        eval_scenarios=[
            CONFIGS / "scenarios" / "curve_no_opponents.json",
            CONFIGS / "scenarios" / "close_opponent.json",
        ],
        agent=AgentConfig(actor_hidden=[8], critic_hidden=[8], warmup_steps=40, batch_size=16),
        run=RunBlock(episodes=3, max_steps=60, eval_max_steps=120, seed=7),
    )
