"""Path-tracking controller: linear feedback on heading and lateral error."""

from pydantic import BaseModel, Field

from app.sim import Action


class TrackingParams(BaseModel):
    eta1: float = Field(3.18, ge=0, description="Steering gain per radian of heading error")
    eta2: float = Field(2.0, ge=0, description="Steering gain per unit of normalized track position")
    steer_threshold: float = Field(0.4, gt=0, lt=1, description="Steering magnitude above which speed is shed")
    k_brake: float = Field(2.0, gt=0, description="Brake per unit of steering beyond the threshold")


def tracking_steer(angle: float, track_pos: float, params: TrackingParams) -> float:
    # Positive angle and positive track_pos both sit left of the centerline: correct to the right.
    raw = -(params.eta1 * angle + params.eta2 * track_pos)
    return min(1.0, max(-1.0, raw))


def tracking_accel(steer: float, params: TrackingParams) -> float:
    excess = max(0.0, abs(steer) - params.steer_threshold)
    return min(0.0, max(-1.0, -params.k_brake * excess))


def tracking_control(angle: float, track_pos: float, params: TrackingParams) -> Action:
    steer = tracking_steer(angle, track_pos, params)
    return Action(steer=steer, accel=tracking_accel(steer, params))
