"""Track and scenario documents.

Track file::

    {"kind": "oval", "straight_length": 100, "radius": 30, "half_width": 6}
    {"kind": "straight", "length": 200, "half_width": 6}
    {"kind": "polyline", "centerline": [[0, 0], [10, 0], ...], "half_width": 6, "closed": true}

Scenario file::

    {"name": "close_opponent", "track": "../tracks/oval.json",
     "ego": {"s": 0, "d": 0, "speed": 10},
     "opponents": [{"s": 60, "d": 0, "speed": 0}]}
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from app.errors import ConfigurationError
from app.sim.track import Track, oval_track, straight_track
from app.sim.vehicle import VehicleState, wrap_angle
from app.sim.world import LaneFollower, WorldState

logger = logging.getLogger(__name__)


class PolylineTrackFile(BaseModel):
    kind: Literal["polyline"]
    centerline: list[tuple[float, float]] = Field(..., min_length=2, description="Centerline points (x, y) in meters")
    half_width: float = Field(..., gt=0, description="Half of the drivable width, meters")
    closed: bool = Field(False, description="Connect the last point back to the first")

    def build(self) -> Track:
        return Track(self.centerline, self.half_width, self.closed)


class StraightTrackFile(BaseModel):
    kind: Literal["straight"]
    length: float = Field(..., gt=0)
    half_width: float = Field(..., gt=0)

    def build(self) -> Track:
        return straight_track(self.length, self.half_width)


class OvalTrackFile(BaseModel):
    kind: Literal["oval"]
    straight_length: float = Field(100.0, gt=0)
    radius: float = Field(30.0, gt=0)
    half_width: float = Field(6.0, gt=0)
    spacing: float = Field(2.0, gt=0, description="Approximate centerline point spacing, meters")

    def build(self) -> Track:
        return oval_track(self.straight_length, self.radius, self.half_width, self.spacing)


TrackSpec = Annotated[PolylineTrackFile | StraightTrackFile | OvalTrackFile, Field(discriminator="kind")]
TrackFile = TypeAdapter(TrackSpec)


class StartPose(BaseModel):
    s: float = Field(0.0, description="Arclength along the centerline, meters")
    d: float = Field(0.0, description="Lateral offset, positive to the left, meters")
    speed: float = Field(0.0, ge=0, description="Initial speed, m/s")
    heading_offset: float = Field(0.0, description="Heading relative to the track tangent, radians")


class OpponentSpec(BaseModel):
    s: float
    d: float = 0.0
    speed: float = Field(0.0, ge=0, description="Constant speed along the centerline; 0 is a parked car")


class ScenarioFile(BaseModel):
    name: str
    track: Path = Field(..., description="Track file, relative to the scenario file")
    ego: StartPose = StartPose()
    opponents: list[OpponentSpec] = []
    randomize_start: bool = Field(False, description="Draw the ego start pose from the env stream")


@dataclass(frozen=True)
class Scenario:
    name: str
    track: Track
    ego: StartPose
    opponents: tuple[LaneFollower, ...]
    randomize_start: bool = False

    def initial_world(self, rng: np.random.Generator | None = None) -> WorldState:
        start = self.ego
        if self.randomize_start and rng is not None:
            s = rng.uniform(0.0, self.track.length) if self.track.closed else start.s
            d = rng.uniform(-0.2, 0.2) * self.track.half_width
            start = start.model_copy(update={"s": float(s), "d": float(d)})
        point, heading = self.track.pose_at(start.s, start.d)
        ego = VehicleState(
            x=float(point[0]),
            y=float(point[1]),
            heading=wrap_angle(heading + start.heading_offset),
            speed=start.speed,
        )
        opponents = tuple(script.state_at(0.0) for script in self.opponents)
        return WorldState(ego=ego, opponents=opponents, sim_time=0.0)


def _read(path: Path, validate):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read {path}: {e}") from e
    try:
        return validate(text)
    except ValidationError as e:
        raise ConfigurationError(f"invalid {path}: {e}") from e


def load_track(path: Path) -> Track:
    return _read(path, TrackFile.validate_json).build()


def load_scenario(path: Path) -> Scenario:
    path = Path(path)
    doc = _read(path, ScenarioFile.model_validate_json)
    track = load_track(path.parent / doc.track)
    logger.debug("Loaded scenario %s with %d opponents", doc.name, len(doc.opponents))
    return Scenario(
        name=doc.name,
        track=track,
        ego=doc.ego,
        opponents=tuple(LaneFollower(track, o.s, o.d, o.speed) for o in doc.opponents),
        randomize_start=doc.randomize_start,
    )
