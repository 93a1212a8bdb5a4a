import math
from dataclasses import dataclass

from pydantic import BaseModel, Field

from app.errors import ContractViolation


def wrap_angle(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True, slots=True)
class Action:
    """Steering ``steer`` (positive = left) and signed pedal ``accel``, both in [-1, 1]."""

    steer: float
    accel: float

    def is_bounded(self) -> bool:
        return -1.0 <= self.steer <= 1.0 and -1.0 <= self.accel <= 1.0

    def clipped(self) -> "Action":
        return Action(min(1.0, max(-1.0, self.steer)), min(1.0, max(-1.0, self.accel)))


@dataclass(frozen=True, slots=True)
class VehicleState:
    x: float
    y: float
    heading: float
    speed: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


class VehicleParams(BaseModel):
    wheelbase: float = Field(2.5, gt=0, description="Axle distance L in meters")
    max_steer_angle: float = Field(0.5, gt=0, lt=math.pi / 2, description="Front wheel angle at full lock, radians")
    max_accel: float = Field(4.0, gt=0, description="Acceleration at full throttle, m/s^2")
    max_brake: float = Field(8.0, gt=0, description="Deceleration at full brake, m/s^2")
    drag_coeff: float = Field(0.05, ge=0, description="Linear speed drag, 1/s")
    v_max: float = Field(20.0, gt=0, description="Speed ceiling, m/s")
    body_length: float = Field(4.0, gt=0, description="Bounding box length, meters")
    body_width: float = Field(2.0, gt=0, description="Bounding box width, meters")


def step_vehicle(state: VehicleState, action: Action, dt: float, params: VehicleParams) -> VehicleState:
    """One explicit Euler step of the kinematic bicycle."""
    if not dt > 0:
        raise ContractViolation(f"dt must be positive, got {dt}")
    if not action.is_bounded():
        raise ContractViolation(f"action out of [-1, 1]: {action}")

    v = state.speed
    x = state.x + v * math.cos(state.heading) * dt
    y = state.y + v * math.sin(state.heading) * dt
    heading = state.heading
    if action.steer != 0.0:
        heading += (v / params.wheelbase) * math.tan(params.max_steer_angle * action.steer) * dt

    a_cmd = params.max_accel * action.accel if action.accel >= 0 else params.max_brake * action.accel
    v = min(params.v_max, max(0.0, v + (a_cmd - params.drag_coeff * v) * dt))
    return VehicleState(x=x, y=y, heading=wrap_angle(heading), speed=v)
