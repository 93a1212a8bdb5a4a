"""Full-length training runs; select with ``pytest -m slow``."""

import math
from pathlib import Path

import pytest

from app.fusion import ControlMode
from app.harness import cmd_train, evaluate, load_actor, load_run_config
from app.sensors import TerminationCause
from app.sim import load_scenario

pytestmark = pytest.mark.slow

DEFAULT_RUN = Path(__file__).resolve().parent.parent / "configs" / "default.json"


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    cfg = load_run_config(DEFAULT_RUN)
    result = cmd_train(cfg, tmp_path_factory.mktemp("train"))
    return cfg, result


def test_policy_beats_an_untrained_actor(trained):
    cfg, result = trained
    assert len(result.returns) == cfg.run.episodes
    final = math.fsum(result.returns[-20:]) / 20

    # The untrained actor from the same init stream, driven for one training-length episode.
    baseline_cfg = cfg.model_copy(update={"run": cfg.run.model_copy(update={"eval_max_steps": cfg.run.max_steps})})
    scenario = load_scenario(cfg.train_scenario)
    records = evaluate(baseline_cfg, load_actor(cfg, None), scenario, ControlMode.DDPG_ONLY)
    baseline = records[0].total_return
    assert final >= 3.0 * baseline


def test_fusion_avoids_the_parked_car(trained):
    cfg, result = trained
    actor = load_actor(cfg, result.checkpoint_path)
    scenario = load_scenario(cfg.train_scenario.parent / "close_opponent.json")
    body_width, body_length = cfg.vehicle.body_width, cfg.vehicle.body_length

    (policy_only,) = evaluate(cfg, actor, scenario, ControlMode.DDPG_ONLY)
    assert policy_only.cause is TerminationCause.COLLISION or policy_only.min_opponent_distance < body_width

    (fused,) = evaluate(cfg, actor, scenario, ControlMode.FUSED)
    assert fused.min_opponent_distance > body_length
    assert fused.cause not in (TerminationCause.COLLISION, TerminationCause.OFF_TRACK)
