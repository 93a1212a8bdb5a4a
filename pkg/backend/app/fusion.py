"""Convex blending of the policy, potential-field and path-tracking commands."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.apf import ApfParams, apf_control
from app.errors import ConfigurationError, ContractViolation
from app.nn import MlpParams, forward
from app.sensors import Observation, extract_obstacles, policy_features
from app.sim import Action
from app.tracking import TrackingParams, tracking_control

WEIGHT_TOLERANCE = 1e-9

BREAKDOWN_COLUMNS = ("delta_l", "tau_l", "delta_f", "tau_f", "delta_p", "tau_p", "delta", "tau")


class FusionWeights(BaseModel):
    """(alpha, beta, lambda): policy, potential-field and path-tracking weights."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    alpha: float = Field(0.4, ge=0, description="Policy-gradient weight")
    beta: float = Field(0.3, ge=0, description="Potential-field weight")
    lam: float = Field(0.3, ge=0, alias="lambda", description="Path-tracking weight")

    @model_validator(mode="after")
    def _renormalized(self) -> "FusionWeights":
        total = math.fsum((self.alpha, self.beta, self.lam))
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise ValueError(f"fusion weights must sum to 1, got {total!r}")
        if total != 1.0:
            object.__setattr__(self, "alpha", self.alpha / total)
            object.__setattr__(self, "beta", self.beta / total)
            object.__setattr__(self, "lam", self.lam / total)
        return self

    @classmethod
    def of(cls, alpha: float, beta: float, lam: float) -> "FusionWeights":
        try:
            return cls(alpha=alpha, beta=beta, lam=lam)
        except ValueError as e:
            raise ConfigurationError(f"invalid fusion weights ({alpha}, {beta}, {lam}): {e}") from e


class ControlMode(str, Enum):
    DDPG_ONLY = "ddpg_only"
    APF_ONLY = "apf_only"
    TRACKING_ONLY = "tracking_only"
    FUSED = "fused"


def mode_weights(mode: ControlMode | str, configured: FusionWeights) -> FusionWeights:
    mode = ControlMode(mode)
    if mode is ControlMode.DDPG_ONLY:
        return FusionWeights.of(1.0, 0.0, 0.0)
    if mode is ControlMode.APF_ONLY:
        return FusionWeights.of(0.0, 1.0, 0.0)
    if mode is ControlMode.TRACKING_ONLY:
        return FusionWeights.of(0.0, 0.0, 1.0)
    return configured


@dataclass(frozen=True, slots=True)
class ControllerBreakdown:
    policy: Action
    apf: Action
    tracking: Action
    fused: Action

    def to_row(self) -> list[float]:
        return [
            self.policy.steer,
            self.policy.accel,
            self.apf.steer,
            self.apf.accel,
            self.tracking.steer,
            self.tracking.accel,
            self.fused.steer,
            self.fused.accel,
        ]


def fuse(policy: Action, apf: Action, tracking: Action, w: FusionWeights) -> Action:
    for name, sub in (("policy", policy), ("apf", apf), ("tracking", tracking)):
        if not sub.is_bounded():
            raise ContractViolation(f"{name} action out of [-1, 1]: {sub}")
    steer = w.alpha * policy.steer + w.beta * apf.steer + w.lam * tracking.steer
    accel = w.alpha * policy.accel + w.beta * apf.accel + w.lam * tracking.accel
    # Convexity bounds the result; the clip only absorbs rounding at the corners.
    return Action(steer, accel).clipped()


def policy_action(actor: MlpParams, features: np.ndarray) -> Action:
    out, _ = forward(actor, features)
    out = np.clip(out, -1.0, 1.0)
    return Action(float(out[0]), float(out[1]))


def hybrid_step(
    obs: Observation,
    actor: MlpParams,
    apf: ApfParams,
    tracking: TrackingParams,
    weights: FusionWeights,
    v_max: float,
) -> ControllerBreakdown:
    """Opponent ranges feed the potential field; the other fields feed the policy and path tracking."""
    policy = policy_action(actor, policy_features(obs, v_max))
    repulsion = apf_control(extract_obstacles(obs), apf)
    follow = tracking_control(obs.angle, obs.track_pos, tracking)
    return ControllerBreakdown(policy, repulsion, follow, fuse(policy, repulsion, follow, weights))


class HybridController:
    def __init__(
        self,
        actor: MlpParams,
        apf: ApfParams,
        tracking: TrackingParams,
        weights: FusionWeights,
        v_max: float,
    ):
        self.actor = actor
        self.apf = apf
        self.tracking = tracking
        self.weights = weights
        self.v_max = v_max

    def step(self, obs: Observation) -> ControllerBreakdown:
        return hybrid_step(obs, self.actor, self.apf, self.tracking, self.weights, self.v_max)
