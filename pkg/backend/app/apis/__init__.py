from fastapi import HTTPException
from pydantic import BaseModel, Field

from app.errors import RacingError
from app.sim import Action


def http_error(e: RacingError) -> HTTPException:
    return HTTPException(status_code=int(e.status_code), detail=str(e))


class ActionModel(BaseModel):
    steer: float = Field(..., description="Steering command, positive = left, nominally in [-1, 1]")
    accel: float = Field(..., description="Pedal command, positive = throttle, negative = brake, nominally in [-1, 1]")

    @classmethod
    def of(cls, action: Action) -> "ActionModel":
        return cls(steer=action.steer, accel=action.accel)

    def to_action(self) -> Action:
        return Action(self.steer, self.accel)
