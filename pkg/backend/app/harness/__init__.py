from .config import RunBlock, RunConfig, load_run_config
from .runner import (
    EpisodeRecord,
    TrainResult,
    cmd_compare,
    cmd_eval,
    cmd_train,
    evaluate,
    extract,
    load_actor,
    make_agent,
    run_episode,
)
from .seeds import STREAMS, rng_split, stream

__all__ = [
    "STREAMS",
    "EpisodeRecord",
    "RunBlock",
    "RunConfig",
    "TrainResult",
    "cmd_compare",
    "cmd_eval",
    "cmd_train",
    "evaluate",
    "extract",
    "load_actor",
    "load_run_config",
    "make_agent",
    "rng_split",
    "run_episode",
    "stream",
]
