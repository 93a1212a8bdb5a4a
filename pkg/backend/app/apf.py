"""Repulsive potential-field controller.

Bearings follow the sensor convention: theta is measured from the ego's lateral
axis toward forward, so the lateral (steering) share of a reading is cos(theta)
and the longitudinal (acceleration) share is sin(theta).
"""

import math
from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.errors import ContractViolation
from app.sensors import D_MAX, ObstacleReading
from app.sim import Action


class ApfParams(BaseModel):
    eta: float = Field(1.5, gt=0, description="Exponent of the inverse-distance repulsion")
    k_fx: float = Field(20.0, gt=0, description="Steering gain on the lateral force")
    k_fy: float = Field(10.0, gt=0, description="Acceleration gain on the longitudinal force")
    d_min: float = Field(1.0, gt=0, description="Distances below this are clamped up to it, meters")
    d_cut: float = Field(50.0, gt=0, description="Readings at or beyond this range exert nothing, meters")

    @model_validator(mode="after")
    def _ranges_ordered(self) -> "ApfParams":
        if not self.d_min < self.d_cut <= D_MAX:
            raise ValueError(f"need 0 < d_min < d_cut <= {D_MAX}")
        return self


def repulsive_force(
    obstacles: Sequence[ObstacleReading],
    eta: float,
    d_min: float,
    d_cut: float,
) -> tuple[float, float]:
    if not obstacles:
        return 0.0, 0.0
    d = np.array([o.d for o in obstacles], dtype=np.float64)
    if np.any(d <= 0):
        raise ContractViolation("obstacle distances must be positive")
    theta = np.array([o.theta for o in obstacles], dtype=np.float64)

    near = d < d_cut
    if not near.any():
        return 0.0, 0.0
    magnitude = np.maximum(d[near], d_min) ** -eta
    # Taken as the complement angle so a reading dead ahead (theta = pi/2) has zero lateral share.
    off_forward = math.pi / 2 - theta[near]
    f_x = -float(np.sum(magnitude * np.sin(off_forward)))
    f_y = -float(np.sum(magnitude * np.cos(off_forward)))
    return f_x, f_y


def apf_action(f_x: float, f_y: float, k_fx: float, k_fy: float) -> Action:
    return Action(steer=k_fx * f_x, accel=k_fy * f_y).clipped()


def apf_control(obstacles: Sequence[ObstacleReading], params: ApfParams) -> Action:
    f_x, f_y = repulsive_force(obstacles, params.eta, params.d_min, params.d_cut)
    return apf_action(f_x, f_y, params.k_fx, params.k_fy)
