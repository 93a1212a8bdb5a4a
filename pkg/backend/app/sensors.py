"""Observation vector, obstacle readings, reward and episode termination."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.errors import SimulationFault
from app.sim import Track, VehicleParams, WorldState, detect_collision, is_off_track, wrap_angle

N_SECTORS = 36
SECTOR_WIDTH = 2.0 * math.pi / N_SECTORS
D_MAX = 200.0
MIN_RANGE = 1e-3
# Projection is refused beyond this many half-widths from the centerline.
PROJECTION_LIMIT = 4.0
DEFAULT_MAX_STEPS = 2000

OPPONENT_COLUMNS = tuple(f"opp{k:02d}" for k in range(N_SECTORS))
OBSERVATION_COLUMNS = ("speed_long", "speed_raw", "angle", "track_pos") + OPPONENT_COLUMNS


def sector_of(bearing: float) -> int:
    """Sector ``k`` covers forward bearings [k * width, (k + 1) * width), left positive."""
    return int(math.floor(bearing / SECTOR_WIDTH)) % N_SECTORS


def sector_bearing(k: int) -> float:
    """Forward bearing of sector ``k``'s center, wrapped to (-pi, pi]."""
    m = k + 0.5 if k < N_SECTORS // 2 else k + 0.5 - N_SECTORS
    return m * SECTOR_WIDTH


@dataclass(frozen=True, slots=True, eq=False)
class Observation:
    speed_long: float
    speed_raw: float
    angle: float
    track_pos: float
    opponents: np.ndarray

    def to_row(self) -> list[float]:
        return [self.speed_long, self.speed_raw, self.angle, self.track_pos, *self.opponents.tolist()]


@dataclass(frozen=True, slots=True)
class ObstacleReading:
    """Range ``d`` and bearing ``theta`` measured from the ego's lateral axis toward forward."""

    d: float
    theta: float


class TerminationCause(str, Enum):
    COLLISION = "collision"
    OFF_TRACK = "off_track"
    MAX_STEPS = "max_steps"


def rangefinders(world: WorldState) -> np.ndarray:
    readings = np.full(N_SECTORS, D_MAX)
    if not world.opponents:
        return readings
    ego = world.ego
    c, s = math.cos(ego.heading), math.sin(ego.heading)
    for opp in world.opponents:
        dx, dy = opp.x - ego.x, opp.y - ego.y
        dist = math.hypot(dx, dy)
        if dist >= D_MAX:
            continue
        forward, left = dx * c + dy * s, -dx * s + dy * c
        bearing = math.atan2(left, forward)
        k = sector_of(bearing)
        readings[k] = min(readings[k], max(dist, MIN_RANGE))
    return readings


def observe(world: WorldState, track: Track) -> Observation:
    ego = world.ego
    frenet = track.project(ego.position)
    if abs(frenet.d) > PROJECTION_LIMIT * track.half_width:
        raise SimulationFault(f"ego {abs(frenet.d):.1f} m from the centerline, beyond projection range")
    angle = wrap_angle(ego.heading - frenet.tangent_heading)
    return Observation(
        speed_long=ego.speed * math.cos(angle),
        speed_raw=ego.speed,
        angle=angle,
        track_pos=frenet.d / track.half_width,
        opponents=rangefinders(world),
    )


def extract_obstacles(obs: Observation) -> list[ObstacleReading]:
    return [
        ObstacleReading(d=float(reading), theta=math.pi / 2 - sector_bearing(k))
        for k, reading in enumerate(obs.opponents)
        if reading < D_MAX
    ]


def reward(obs: Observation, v_max: float) -> float:
    """Track-projected speed mapped linearly onto [0, 2]."""
    projected = obs.speed_raw * math.cos(obs.angle) / v_max
    return 2.0 * min(1.0, max(0.0, projected))


def policy_features(obs: Observation, v_max: float) -> np.ndarray:
    return np.array([obs.speed_long / v_max, obs.speed_raw / v_max, obs.angle / math.pi, obs.track_pos])


FEATURE_SCALES = {"speed_long": "v_max", "speed_raw": "v_max", "angle": "pi", "track_pos": "1"}
N_FEATURES = len(FEATURE_SCALES)


def is_terminal(
    world: WorldState,
    track: Track,
    params: VehicleParams,
    step: int = 0,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> tuple[bool, TerminationCause | None]:
    if detect_collision(world, params):
        return True, TerminationCause.COLLISION
    if is_off_track(track.project(world.ego.position), track):
        return True, TerminationCause.OFF_TRACK
    if step >= max_steps:
        return True, TerminationCause.MAX_STEPS
    return False, None
