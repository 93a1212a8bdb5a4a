"""Error hierarchy shared by the CLI and the HTTP routers.

Each error carries the process exit code used by the CLI and the HTTP status
used when a router converts it into an ``HTTPException``.
"""

from http import HTTPStatus


class RacingError(Exception):
    exit_code: int = 2
    status_code: int = HTTPStatus.INTERNAL_SERVER_ERROR


class ConfigurationError(RacingError):
    """A config, track, scenario or weight block is malformed or inconsistent."""

    exit_code = 1
    status_code = HTTPStatus.BAD_REQUEST


class CheckpointError(ConfigurationError):
    """A checkpoint file is malformed, truncated or does not match the config."""


class SimulationFault(RacingError):
    status_code = HTTPStatus.UNPROCESSABLE_ENTITY


class ContractViolation(RacingError, ValueError):
    """A caller broke a precondition (shapes, ranges, stale caches)."""

    status_code = HTTPStatus.UNPROCESSABLE_ENTITY


__all__ = [
    "RacingError",
    "ConfigurationError",
    "CheckpointError",
    "SimulationFault",
    "ContractViolation",
]
