from fastapi import APIRouter
from pydantic import BaseModel, Field

from app.apis import ActionModel, http_error
from app.errors import RacingError
from app.sim import TrackSpec, VehicleParams, VehicleState, is_off_track, step_vehicle

router = APIRouter(prefix="/simulation", tags=["Simulation"])


class ProjectRequest(BaseModel):
    track: TrackSpec = Field(..., description="Track document, same shape as a track file")
    point: tuple[float, float] = Field(..., description="World position (x, y), meters")


class FrenetResponse(BaseModel):
    s: float = Field(..., description="Arclength of the projection point, meters")
    d: float = Field(..., description="Signed lateral offset, positive to the left, meters")
    tangent_heading: float = Field(..., description="Track heading at the projection point, radians")
    off_track: bool


class VehicleStateModel(BaseModel):
    x: float
    y: float
    heading: float = Field(..., description="Radians, counter-clockwise from +x")
    speed: float = Field(..., ge=0, description="m/s")


class StepRequest(BaseModel):
    state: VehicleStateModel
    action: ActionModel
    dt: float = Field(0.02, description="Integration step, seconds")
    params: VehicleParams = VehicleParams()


@router.post("/project", response_model=FrenetResponse)
def project(body: ProjectRequest) -> FrenetResponse:
    try:
        track = body.track.build()
        frenet = track.project(body.point)
    except RacingError as e:
        raise http_error(e) from e
    return FrenetResponse(
        s=frenet.s,
        d=frenet.d,
        tangent_heading=frenet.tangent_heading,
        off_track=is_off_track(frenet, track),
    )


@router.post("/step", response_model=VehicleStateModel)
def step(body: StepRequest) -> VehicleStateModel:
    state = VehicleState(**body.state.model_dump())
    try:
        nxt = step_vehicle(state, body.action.to_action(), body.dt, body.params)
    except RacingError as e:
        raise http_error(e) from e
    return VehicleStateModel(x=nxt.x, y=nxt.y, heading=nxt.heading, speed=nxt.speed)
