from .files import OpponentSpec, Scenario, StartPose, TrackSpec, load_scenario, load_track
from .track import FrenetCoord, Track, is_off_track, oval_track, project_to_centerline, straight_track
from .vehicle import Action, VehicleParams, VehicleState, step_vehicle, wrap_angle
from .world import LaneFollower, OpponentScript, WorldState, boxes_overlap, detect_collision, step_world

__all__ = [
    "Action",
    "FrenetCoord",
    "LaneFollower",
    "OpponentScript",
    "OpponentSpec",
    "Scenario",
    "StartPose",
    "Track",
    "TrackSpec",
    "VehicleParams",
    "VehicleState",
    "WorldState",
    "boxes_overlap",
    "detect_collision",
    "is_off_track",
    "load_scenario",
    "load_track",
    "oval_track",
    "project_to_centerline",
    "step_vehicle",
    "step_world",
    "straight_track",
    "wrap_angle",
]
