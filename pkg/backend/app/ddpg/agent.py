"""Deterministic policy gradient agent.

The critic regresses Q(s, a) onto ``r + gamma * (1 - done) * Q'(s', mu'(s'))``;
the actor ascends ``mean Q(s, mu(s))`` by chaining the action slice of the
critic's input gradient through the actor.
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

from app.ddpg.noise import GaussianNoise, OUNoise
from app.ddpg.replay import Batch, ReplayBuffer, Transition
from app.errors import ContractViolation
from app.nn import Activation, AdamState, Gradients, MlpParams, adam_step, backward, forward, init_mlp, soft_blend
from app.sim import Action

ACTION_DIM = 2


class AgentConfig(BaseModel):
    gamma: float = Field(0.99, gt=0, lt=1, description="Discount factor")
    lr_actor: float = Field(1e-4, gt=0, description="Actor Adam learning rate")
    lr_critic: float = Field(1e-3, gt=0, description="Critic Adam learning rate")
    tau_soft: float = Field(0.001, gt=0, le=1, description="Target network blend per update")
    batch_size: int = Field(64, gt=0)
    warmup_steps: int = Field(1000, ge=0, description="Transitions collected before the first update")
    buffer_capacity: int = Field(100_000, gt=0)
    noise: Literal["ou", "gaussian"] = "ou"
    ou_theta: float = Field(0.15, ge=0)
    ou_sigma: float = Field(0.2, ge=0)
    gaussian_sigma: float = Field(0.1, ge=0)
    actor_hidden: list[int] = Field([64, 32], description="Hidden widths; [400, 300] reproduces the full-size actor")
    critic_hidden: list[int] = Field([64, 32], description="Hidden widths; an empty list gives a linear critic")

    def actor_dims(self, obs_dim: int) -> list[int]:
        return [obs_dim, *self.actor_hidden, ACTION_DIM]

    def critic_dims(self, obs_dim: int) -> list[int]:
        return [obs_dim + ACTION_DIM, *self.critic_hidden, 1]


def actor_activations(n_hidden: int) -> list[Activation]:
    return [Activation.RELU] * n_hidden + [Activation.TANH]


def critic_activations(n_hidden: int) -> list[Activation]:
    return [Activation.RELU] * n_hidden + [Activation.LINEAR]


def _network_seeds(init_seed: int) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    actor_seq, critic_seq = np.random.SeedSequence(init_seed).spawn(2)
    return actor_seq, critic_seq


def fresh_actor(obs_dim: int, config: AgentConfig, init_seed: int) -> MlpParams:
    """The actor an untrained agent built from ``init_seed`` starts with."""
    actor_seq, _ = _network_seeds(init_seed)
    return init_mlp(config.actor_dims(obs_dim), actor_activations(len(config.actor_hidden)), actor_seq)


class Agent:
    def __init__(
        self,
        obs_dim: int,
        config: AgentConfig,
        init_seed: int = 0,
        noise_seed: int = 1,
        sample_seed: int = 2,
    ):
        self.obs_dim = obs_dim
        self.config = config
        _, critic_seq = _network_seeds(init_seed)
        self.actor = fresh_actor(obs_dim, config, init_seed)
        self.critic = init_mlp(config.critic_dims(obs_dim), critic_activations(len(config.critic_hidden)), critic_seq)
        self.target_actor = self.actor.copy()
        self.target_critic = self.critic.copy()
        self.actor_opt = AdamState.fresh(self.actor)
        self.critic_opt = AdamState.fresh(self.critic)
        self.buffer = ReplayBuffer(config.buffer_capacity)
        self.rng = np.random.default_rng(sample_seed)

        noise_rng = np.random.default_rng(noise_seed)
        if config.noise == "ou":
            self.noise = OUNoise(ACTION_DIM, noise_rng, theta=config.ou_theta, sigma=config.ou_sigma)
        else:
            self.noise = GaussianNoise(ACTION_DIM, noise_rng, sigma=config.gaussian_sigma)

    def remember(self, transition: Transition) -> None:
        self.buffer.push(transition)

    def load_networks(self, actor: MlpParams, critic: MlpParams, target_actor: MlpParams, target_critic: MlpParams) -> None:
        """Install restored networks; optimizer moments restart from zero."""
        for name, have, want in (
            ("actor", actor, self.actor),
            ("critic", critic, self.critic),
            ("target_actor", target_actor, self.actor),
            ("target_critic", target_critic, self.critic),
        ):
            if have.dims != want.dims or have.activations != want.activations:
                raise ContractViolation(f"{name} dims {have.dims} do not match configured {want.dims}")
        self.actor, self.critic = actor, critic
        self.target_actor, self.target_critic = target_actor, target_critic
        self.actor_opt = AdamState.fresh(actor)
        self.critic_opt = AdamState.fresh(critic)


@dataclass(frozen=True, slots=True)
class TrainMetrics:
    ready: bool
    critic_loss: float = math.nan
    mean_q: float = math.nan


def select_action(agent: Agent, obs: np.ndarray, explore: bool) -> Action:
    obs = np.asarray(obs, dtype=np.float64)
    if obs.shape != (agent.obs_dim,):
        raise ContractViolation(f"observation shape {obs.shape} != ({agent.obs_dim},)")
    a, _ = forward(agent.actor, obs)
    if explore:
        a = a + agent.noise.sample()
    a = np.clip(a, -1.0, 1.0)
    return Action(float(a[0]), float(a[1]))


def critic_targets(batch: Batch, target_actor: MlpParams, target_critic: MlpParams, gamma: float) -> np.ndarray:
    a_next, _ = forward(target_actor, batch.s_next)
    q_next, _ = forward(target_critic, np.hstack([batch.s_next, a_next]))
    return batch.r + gamma * (1.0 - batch.done) * q_next[:, 0]


def critic_loss_and_grads(critic: MlpParams, batch: Batch, targets: np.ndarray) -> tuple[float, Gradients]:
    q, cache = forward(critic, np.hstack([batch.s, batch.a]))
    err = q[:, 0] - targets
    grads, _ = backward(critic, cache, (2.0 / len(batch)) * err[:, None])
    return float(np.mean(err * err)), grads


def actor_objective_and_grads(actor: MlpParams, critic: MlpParams, states: np.ndarray) -> tuple[float, Gradients]:
    """J = mean Q(s, mu(s)) and its gradient with respect to the actor parameters."""
    n, obs_dim = states.shape
    a, actor_cache = forward(actor, states)
    q, critic_cache = forward(critic, np.hstack([states, a]))
    _, input_grad = backward(critic, critic_cache, np.full_like(q, 1.0 / n))
    grads, _ = backward(actor, actor_cache, input_grad[:, obs_dim:])
    return float(q.mean()), grads


def critic_update(agent: Agent, batch: Batch) -> float:
    targets = critic_targets(batch, agent.target_actor, agent.target_critic, agent.config.gamma)
    loss, grads = critic_loss_and_grads(agent.critic, batch, targets)
    agent.critic, agent.critic_opt = adam_step(agent.critic, grads, agent.critic_opt, agent.config.lr_critic)
    return loss


def actor_update(agent: Agent, batch: Batch) -> float:
    mean_q, grads = actor_objective_and_grads(agent.actor, agent.critic, batch.s)
    # Adam descends, so hand it the negated ascent direction.
    agent.actor, agent.actor_opt = adam_step(agent.actor, grads.scaled(-1.0), agent.actor_opt, agent.config.lr_actor)
    return mean_q


def soft_update(target: MlpParams, online: MlpParams, tau_soft: float) -> MlpParams:
    return soft_blend(target, online, tau_soft)


def train_step(agent: Agent) -> TrainMetrics:
    cfg = agent.config
    if len(agent.buffer) < max(cfg.batch_size, cfg.warmup_steps):
        return TrainMetrics(ready=False)
    batch = agent.buffer.sample(cfg.batch_size, agent.rng)
    loss = critic_update(agent, batch)
    mean_q = actor_update(agent, batch)
    agent.target_actor = soft_update(agent.target_actor, agent.actor, cfg.tau_soft)
    agent.target_critic = soft_update(agent.target_critic, agent.critic, cfg.tau_soft)
    return TrainMetrics(ready=True, critic_loss=loss, mean_q=mean_q)
