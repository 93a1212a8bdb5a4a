import math
from dataclasses import dataclass, replace
from typing import Protocol, Sequence

from app.sim.track import Track
from app.sim.vehicle import Action, VehicleParams, VehicleState, step_vehicle


@dataclass(frozen=True, slots=True)
class WorldState:
    ego: VehicleState
    opponents: tuple[VehicleState, ...] = ()
    sim_time: float = 0.0


class OpponentScript(Protocol):
    def state_at(self, t: float) -> VehicleState: ...


@dataclass(frozen=True, slots=True)
class LaneFollower:
    """Opponent holding lateral offset ``d0`` and constant ``speed`` along the centerline."""

    track: Track
    s0: float
    d0: float = 0.0
    speed: float = 0.0

    def state_at(self, t: float) -> VehicleState:
        point, heading = self.track.pose_at(self.s0 + self.speed * t, self.d0)
        return VehicleState(x=float(point[0]), y=float(point[1]), heading=heading, speed=self.speed)


def step_world(
    world: WorldState,
    ego_action: Action,
    dt: float,
    params: VehicleParams,
    opponent_script: Sequence[OpponentScript] = (),
) -> WorldState:
    t_next = world.sim_time + dt
    ego = step_vehicle(world.ego, ego_action, dt, params)
    if opponent_script:
        opponents = tuple(script.state_at(t_next) for script in opponent_script)
    else:
        opponents = world.opponents
    return replace(world, ego=ego, opponents=opponents, sim_time=t_next)


def _box_axes(state: VehicleState) -> tuple[tuple[float, float], tuple[float, float]]:
    c, s = math.cos(state.heading), math.sin(state.heading)
    return (c, s), (-s, c)


def boxes_overlap(a: VehicleState, b: VehicleState, params: VehicleParams) -> bool:
    """Separating-axis test on two equal oriented boxes; touching counts as contact."""
    half_l, half_w = params.body_length / 2, params.body_width / 2
    dx, dy = b.x - a.x, b.y - a.y
    if dx * dx + dy * dy > (params.body_length + params.body_width) ** 2:
        return False

    a_axes, b_axes = _box_axes(a), _box_axes(b)
    for ax, ay in a_axes + b_axes:
        radius = 0.0
        for (ux, uy), (vx, vy) in (a_axes, b_axes):
            radius += half_l * abs(ux * ax + uy * ay) + half_w * abs(vx * ax + vy * ay)
        if abs(dx * ax + dy * ay) > radius:
            return False
    return True


def detect_collision(world: WorldState, params: VehicleParams) -> bool:
    return any(boxes_overlap(world.ego, opp, params) for opp in world.opponents)
