"""Training, evaluation and ablation runs, and their CSV outputs.

Metrics CSV (one row per training episode)::

    episode, return, steps, cause, critic_loss, mean_q, rolling_mean_q

Trace CSV (one row per evaluation step; the observation is the one the
controllers acted on, reward and termination follow from the command)::

    step, time, x, y, heading, speed, speed_long, speed_raw, angle, track_pos,
    opp00 .. opp35, delta_l, tau_l, delta_f, tau_f, delta_p, tau_p, delta, tau,
    reward, done, cause

Episode summaries (episodes.csv, compare.csv)::

    scenario, mode, episode, return, steps, cause, min_opponent_distance, mean_abs_e_norm
"""

import csv
import logging
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from app.ddpg import (
    Agent,
    Transition,
    fresh_actor,
    load_agent_checkpoint,
    save_agent_checkpoint,
    select_action,
    train_step,
)
from app.errors import CheckpointError, ConfigurationError
from app.fusion import BREAKDOWN_COLUMNS, ControlMode, HybridController, mode_weights
from app.harness.config import RunConfig
from app.harness.seeds import rng_split, stream
from app.nn import MlpParams
from app.sensors import (
    D_MAX,
    FEATURE_SCALES,
    N_FEATURES,
    OBSERVATION_COLUMNS,
    TerminationCause,
    is_terminal,
    observe,
    policy_features,
    reward,
)
from app.sim import Scenario, WorldState, load_scenario, step_world

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ("episode", "return", "steps", "cause", "critic_loss", "mean_q", "rolling_mean_q")
TRACE_COLUMNS = (
    ("step", "time", "x", "y", "heading", "speed")
    + OBSERVATION_COLUMNS
    + BREAKDOWN_COLUMNS
    + ("reward", "done", "cause")
)
SUMMARY_COLUMNS = (
    "scenario",
    "mode",
    "episode",
    "return",
    "steps",
    "cause",
    "min_opponent_distance",
    "mean_abs_e_norm",
)
CHECKPOINT_NAME = "agent.ckpt"
METRICS_NAME = "metrics.csv"

# Only these causes end the underlying process; a step budget is a truncation.
_BOOTSTRAP_MASKING = (TerminationCause.COLLISION, TerminationCause.OFF_TRACK)


@dataclass(frozen=True, slots=True)
class EpisodeRecord:
    episode: int
    total_return: float
    steps: int
    cause: TerminationCause | None
    min_opponent_distance: float
    mean_abs_e_norm: float

    def to_row(self, scenario: str, mode: ControlMode) -> list:
        cause = self.cause.value if self.cause else ""
        return [
            scenario,
            mode.value,
            self.episode,
            self.total_return,
            self.steps,
            cause,
            self.min_opponent_distance,
            self.mean_abs_e_norm,
        ]


@dataclass(frozen=True, slots=True)
class TrainResult:
    metrics_path: Path
    checkpoint_path: Path | None
    returns: list[float]


def _nanmean(values: Sequence[float]) -> float:
    finite = [v for v in values if not math.isnan(v)]
    return math.fsum(finite) / len(finite) if finite else math.nan


def format_table(headers: Sequence[str], rows: Sequence[Sequence]) -> list[str]:
    cells = [[f"{v:.4g}" if isinstance(v, float) else str(v) for v in row] for row in rows]
    widths = [max(len(str(item)) for item in col) for col in zip(*([list(headers)] + cells))]
    lines = [" | ".join(f"{h:<{w}}" for h, w in zip(headers, widths)), "-+-".join("-" * w for w in widths)]
    lines += [" | ".join(f"{c:<{w}}" for c, w in zip(row, widths)) for row in cells]
    return lines


def _write_csv(path: Path, headers: Sequence[str], rows: Sequence[Sequence]) -> None:
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(headers)
        writer.writerows(rows)


# --- training ---------------------------------------------------------------


def _train_episode(agent: Agent, scenario: Scenario, cfg: RunConfig, env_rng: np.random.Generator):
    track, vehicle = scenario.track, cfg.vehicle
    world = scenario.initial_world(env_rng)
    agent.noise.reset()
    features = policy_features(observe(world, track), vehicle.v_max)

    total, losses, qs = 0.0, [], []
    steps, cause = 0, None
    for steps in range(1, cfg.run.max_steps + 1):
        action = select_action(agent, features, explore=True)
        world = step_world(world, action, cfg.run.dt, vehicle, scenario.opponents)
        done, cause = is_terminal(world, track, vehicle, steps, cfg.run.max_steps)
        next_obs = observe(world, track)
        r = reward(next_obs, vehicle.v_max)
        next_features = policy_features(next_obs, vehicle.v_max)
        agent.remember(
            Transition(
                s=features,
                a=np.array([action.steer, action.accel]),
                r=r,
                s_next=next_features,
                done=cause in _BOOTSTRAP_MASKING,
            )
        )
        metrics = train_step(agent)
        if metrics.ready:
            losses.append(metrics.critic_loss)
            qs.append(metrics.mean_q)
        total += r
        features = next_features
        if done:
            break
    return total, steps, cause, _nanmean(losses), _nanmean(qs)


def make_agent(cfg: RunConfig) -> Agent:
    seed = cfg.run.seed
    return Agent(
        N_FEATURES,
        cfg.agent,
        init_seed=rng_split(seed, "init"),
        noise_seed=rng_split(seed, "noise"),
        sample_seed=rng_split(seed, "sampling"),
    )


def cmd_train(cfg: RunConfig, out_dir: Path) -> TrainResult:
    """Opponent-free policy training with exploration; fusion stays off."""
    scenario = load_scenario(cfg.train_scenario)
    if scenario.opponents:
        raise ConfigurationError(
            f"training scenario {scenario.name} has {len(scenario.opponents)} opponents; training is opponent-free"
        )
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    agent = make_agent(cfg)
    env_rng = stream(cfg.run.seed, "env")
    recent_q: deque[float] = deque(maxlen=cfg.run.rolling_window)
    returns: list[float] = []

    metrics_path = out_dir / METRICS_NAME
    with metrics_path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(METRICS_COLUMNS)
        for episode in range(cfg.run.episodes):
            total, steps, cause, loss, mean_q = _train_episode(agent, scenario, cfg, env_rng)
            recent_q.append(mean_q)
            rolling_q = _nanmean(recent_q)
            returns.append(total)
            cause_name = cause.value if cause else ""
            writer.writerow([episode, total, steps, cause_name, loss, mean_q, rolling_q])
            logger.info(
                "episode %d return %.2f steps %d cause %s rolling mean Q %.3f",
                episode,
                total,
                steps,
                cause_name or "-",
                rolling_q,
            )

    if cfg.run.episodes == 0:
        logger.info("No episodes requested; no checkpoint written")
        return TrainResult(metrics_path, None, returns)
    checkpoint_path = out_dir / CHECKPOINT_NAME
    save_agent_checkpoint(agent, checkpoint_path, FEATURE_SCALES)
    logger.info("Wrote %s and %s", metrics_path, checkpoint_path)
    return TrainResult(metrics_path, checkpoint_path, returns)


# --- evaluation -------------------------------------------------------------


def load_actor(cfg: RunConfig, checkpoint: Path | None) -> MlpParams:
    """The checkpointed actor, or the untrained actor of the run's init stream."""
    if checkpoint is None:
        logger.info("No checkpoint given; evaluating a fresh actor (seed %d)", cfg.run.seed)
        return fresh_actor(N_FEATURES, cfg.agent, rng_split(cfg.run.seed, "init"))
    ckpt = load_agent_checkpoint(checkpoint)
    want = cfg.agent.actor_dims(N_FEATURES)
    if ckpt.manifest.obs_dim != N_FEATURES or ckpt.actor.dims != want:
        raise CheckpointError(f"{checkpoint} holds an actor {ckpt.actor.dims}, config expects {want}")
    if ckpt.manifest.feature_scales != FEATURE_SCALES:
        raise CheckpointError(f"{checkpoint} was trained on differently scaled features")
    return ckpt.actor


def run_episode(
    scenario: Scenario,
    controller: HybridController,
    cfg: RunConfig,
    episode: int,
    env_rng: np.random.Generator,
    write_row: Callable[[list], object] | None = None,
) -> EpisodeRecord:
    track, vehicle, dt = scenario.track, cfg.vehicle, cfg.run.dt
    max_steps = cfg.run.eval_max_steps
    world: WorldState = scenario.initial_world(env_rng)
    obs = observe(world, track)

    total, min_range, abs_e = 0.0, float(obs.opponents.min(initial=D_MAX)), []
    steps, cause = 0, None
    for step in range(max_steps):
        breakdown = controller.step(obs)
        next_world = step_world(world, breakdown.fused, dt, vehicle, scenario.opponents)
        done, cause = is_terminal(next_world, track, vehicle, step + 1, max_steps)
        next_obs = observe(next_world, track)
        r = reward(next_obs, vehicle.v_max)
        if write_row is not None:
            ego = world.ego
            write_row(
                [step, world.sim_time, ego.x, ego.y, ego.heading, ego.speed]
                + obs.to_row()
                + breakdown.to_row()
                + [r, int(done), cause.value if cause else ""]
            )
        total += r
        abs_e.append(abs(obs.track_pos))
        min_range = min(min_range, float(next_obs.opponents.min()))
        world, obs, steps = next_world, next_obs, step + 1
        if done:
            break
    return EpisodeRecord(episode, total, steps, cause, min_range, math.fsum(abs_e) / len(abs_e))


def evaluate(
    cfg: RunConfig,
    actor: MlpParams,
    scenario: Scenario,
    mode: ControlMode,
    trace_dir: Path | None = None,
) -> list[EpisodeRecord]:
    controller = HybridController(
        actor, cfg.apf, cfg.tracking, mode_weights(mode, cfg.fusion), cfg.vehicle.v_max
    )
    env_rng = stream(cfg.run.seed, "env")
    records = []
    for episode in range(cfg.run.eval_episodes):
        if trace_dir is None:
            records.append(run_episode(scenario, controller, cfg, episode, env_rng))
            continue
        path = trace_dir / f"trace_{scenario.name}_{mode.value}_{episode:03d}.csv"
        with path.open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(TRACE_COLUMNS)
            records.append(run_episode(scenario, controller, cfg, episode, env_rng, writer.writerow))
        logger.debug("Wrote %s", path)
    return records


def cmd_eval(cfg: RunConfig, checkpoint: Path | None, mode: ControlMode | str, out_dir: Path) -> list[EpisodeRecord]:
    mode = ControlMode(mode)
    if not cfg.eval_scenarios:
        raise ConfigurationError("no eval_scenarios configured")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    actor = load_actor(cfg, checkpoint)

    rows, records = [], []
    for path in cfg.eval_scenarios:
        scenario = load_scenario(path)
        for record in evaluate(cfg, actor, scenario, mode, trace_dir=out_dir):
            rows.append(record.to_row(scenario.name, mode))
            records.append(record)
            logger.info(
                "%s/%s episode %d: return %.2f over %d steps, min distance %.2f m",
                scenario.name,
                mode.value,
                record.episode,
                record.total_return,
                record.steps,
                record.min_opponent_distance,
            )
    _write_csv(out_dir / "episodes.csv", SUMMARY_COLUMNS, rows)
    return records


def cmd_compare(cfg: RunConfig, checkpoint: Path | None, out_dir: Path) -> list[list]:
    """Every mode on every evaluation scenario; writes compare.csv."""
    if not cfg.eval_scenarios:
        raise ConfigurationError("no eval_scenarios configured")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    actor = load_actor(cfg, checkpoint)

    rows = []
    for path in cfg.eval_scenarios:
        scenario = load_scenario(path)
        for mode in ControlMode:
            rows += [record.to_row(scenario.name, mode) for record in evaluate(cfg, actor, scenario, mode)]
    _write_csv(out_dir / "compare.csv", SUMMARY_COLUMNS, rows)
    for line in format_table(SUMMARY_COLUMNS, rows):
        logger.info(line)
    return rows


def extract(path: Path, columns: Sequence[str]) -> list[list[str]]:
    """Named columns of a trace, metrics or summary CSV, header row first."""
    try:
        with Path(path).open(newline="") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None:
                raise ConfigurationError(f"{path} is empty")
            missing = [c for c in columns if c not in header]
            if missing:
                raise ConfigurationError(f"{path} has no column(s) {', '.join(missing)}")
            idx = [header.index(c) for c in columns]
            return [list(columns)] + [[row[i] for i in idx] for row in reader]
    except OSError as e:
        raise ConfigurationError(f"cannot read {path}: {e}") from e


__all__ = [
    "CHECKPOINT_NAME",
    "METRICS_COLUMNS",
    "METRICS_NAME",
    "SUMMARY_COLUMNS",
    "TRACE_COLUMNS",
    "EpisodeRecord",
    "TrainResult",
    "cmd_compare",
    "cmd_eval",
    "cmd_train",
    "evaluate",
    "extract",
    "format_table",
    "load_actor",
    "make_agent",
    "run_episode",
]
