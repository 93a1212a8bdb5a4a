from .agent import (
    ACTION_DIM,
    Agent,
    AgentConfig,
    TrainMetrics,
    actor_objective_and_grads,
    actor_update,
    critic_loss_and_grads,
    critic_targets,
    critic_update,
    fresh_actor,
    select_action,
    soft_update,
    train_step,
)
from .checkpoint import AgentCheckpoint, AgentManifest, load_agent_checkpoint, save_agent_checkpoint
from .noise import GaussianNoise, OUNoise
from .replay import Batch, ReplayBuffer, Transition

__all__ = [
    "ACTION_DIM",
    "Agent",
    "AgentCheckpoint",
    "AgentConfig",
    "AgentManifest",
    "Batch",
    "GaussianNoise",
    "OUNoise",
    "ReplayBuffer",
    "TrainMetrics",
    "Transition",
    "actor_objective_and_grads",
    "actor_update",
    "critic_loss_and_grads",
    "critic_targets",
    "critic_update",
    "fresh_actor",
    "load_agent_checkpoint",
    "save_agent_checkpoint",
    "select_action",
    "soft_update",
    "train_step",
]
