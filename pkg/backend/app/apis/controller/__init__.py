import functools
import logging

import numpy as np
from fastapi import APIRouter
from pydantic import BaseModel, Field

from app.apf import ApfParams
from app.apis import ActionModel, http_error
from app.ddpg import AgentConfig, fresh_actor, load_agent_checkpoint
from app.env import load_settings
from app.errors import CheckpointError, RacingError
from app.fusion import ControlMode, FusionWeights, fuse, hybrid_step, mode_weights
from app.nn import MlpParams
from app.sensors import D_MAX, N_FEATURES, N_SECTORS, Observation
from app.tracking import TrackingParams

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/controller", tags=["Controller"])

# --- Pydantic Models ---


class ObservationModel(BaseModel):
    speed_long: float = Field(..., description="Speed along the track tangent, m/s")
    speed_raw: float = Field(..., ge=0, description="Vehicle speed, m/s")
    angle: float = Field(..., description="Heading error relative to the track tangent, radians")
    track_pos: float = Field(..., description="Lateral offset divided by the track half-width")
    opponents: list[float] = Field(
        ...,
        min_length=N_SECTORS,
        max_length=N_SECTORS,
        description=f"Nearest opponent distance per 10 degree sector, meters; {D_MAX:g} means none in range",
    )

    def to_observation(self) -> Observation:
        return Observation(self.speed_long, self.speed_raw, self.angle, self.track_pos, np.array(self.opponents))


class WeightsModel(BaseModel):
    alpha: float = Field(0.4, description="Policy-gradient weight")
    beta: float = Field(0.3, description="Potential-field weight")
    lam: float = Field(0.3, alias="lambda", description="Path-tracking weight")

    def to_weights(self) -> FusionWeights:
        return FusionWeights.of(self.alpha, self.beta, self.lam)


class ActRequest(BaseModel):
    observation: ObservationModel
    mode: ControlMode = Field(ControlMode.FUSED, description="Which controllers drive the fused command")
    weights: WeightsModel = Field(WeightsModel(), description="Weights used in fused mode")
    apf: ApfParams = ApfParams()
    tracking: TrackingParams = TrackingParams()
    v_max: float = Field(20.0, gt=0, description="Speed scale of the policy features, m/s")


class BreakdownResponse(BaseModel):
    policy: ActionModel
    apf: ActionModel
    tracking: ActionModel
    fused: ActionModel


class FuseRequest(BaseModel):
    policy: ActionModel
    apf: ActionModel
    tracking: ActionModel
    weights: WeightsModel = WeightsModel()


# --- Actor ---


@functools.cache
def get_actor() -> MlpParams:
    settings = load_settings()
    if settings.checkpoint is None:
        logger.info("Serving a fresh actor (seed %d)", settings.actor_seed)
        return fresh_actor(N_FEATURES, AgentConfig(), settings.actor_seed)
    ckpt = load_agent_checkpoint(settings.checkpoint)
    if ckpt.manifest.obs_dim != N_FEATURES:
        raise CheckpointError(f"{settings.checkpoint} expects {ckpt.manifest.obs_dim} features, not {N_FEATURES}")
    logger.info("Serving actor %s from %s", ckpt.actor.dims, settings.checkpoint)
    return ckpt.actor


# --- Endpoints ---


@router.post("/act", response_model=BreakdownResponse)
def act(body: ActRequest) -> BreakdownResponse:
    try:
        weights = mode_weights(body.mode, body.weights.to_weights())
        breakdown = hybrid_step(body.observation.to_observation(), get_actor(), body.apf, body.tracking, weights, body.v_max)
    except RacingError as e:
        raise http_error(e) from e
    return BreakdownResponse(
        policy=ActionModel.of(breakdown.policy),
        apf=ActionModel.of(breakdown.apf),
        tracking=ActionModel.of(breakdown.tracking),
        fused=ActionModel.of(breakdown.fused),
    )


@router.post("/fuse", response_model=ActionModel)
def fuse_actions(body: FuseRequest) -> ActionModel:
    try:
        fused = fuse(body.policy.to_action(), body.apf.to_action(), body.tracking.to_action(), body.weights.to_weights())
    except RacingError as e:
        raise http_error(e) from e
    return ActionModel.of(fused)
