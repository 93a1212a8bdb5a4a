import numpy as np
import pytest

from app.ddpg import (
    Agent,
    AgentConfig,
    Batch,
    GaussianNoise,
    OUNoise,
    ReplayBuffer,
    Transition,
    actor_objective_and_grads,
    actor_update,
    critic_loss_and_grads,
    critic_targets,
    critic_update,
    load_agent_checkpoint,
    save_agent_checkpoint,
    select_action,
    soft_update,
    train_step,
)
from app.errors import CheckpointError, ContractViolation
from app.nn import Activation, LayerParams, MlpParams, forward, init_mlp
from app.sim import Action

from .helpers import assert_grads_close, numeric_param_grads, relu_margin

SMALL = AgentConfig(actor_hidden=[6], critic_hidden=[6], batch_size=4, warmup_steps=8)


def transition(r: float, obs_dim: int = 3, done: bool = False, rng: np.random.Generator | None = None) -> Transition:
    rng = rng or np.random.default_rng(int(r * 1000) % 97)
    return Transition(rng.normal(size=obs_dim), rng.uniform(-1, 1, 2), r, rng.normal(size=obs_dim), done)


def random_batch(rng: np.random.Generator, n: int, obs_dim: int, done_rate: float = 0.3) -> Batch:
    return Batch(
        s=rng.normal(size=(n, obs_dim)),
        a=rng.uniform(-1, 1, (n, 2)),
        r=rng.normal(size=n),
        s_next=rng.normal(size=(n, obs_dim)),
        done=rng.random(n) < done_rate,
    )


def test_replay_is_fifo_once_full():
    buffer = ReplayBuffer(3)
    for r in range(5):
        buffer.push(transition(float(r)))
    assert len(buffer) == 3
    assert [t.r for t in buffer] == [2.0, 3.0, 4.0]


def test_replay_sampling():
    buffer = ReplayBuffer(10)
    with pytest.raises(ContractViolation):
        buffer.sample(4, np.random.default_rng(0))
    for r in range(4):
        buffer.push(transition(float(r), done=r == 3))
    batch = buffer.sample(16, np.random.default_rng(0))
    assert batch.s.shape == (16, 3)
    assert batch.a.shape == (16, 2)
    assert set(batch.r) <= {0.0, 1.0, 2.0, 3.0}
    assert np.array_equal(batch.done, batch.r == 3.0)
    again = buffer.sample(16, np.random.default_rng(0))
    assert np.array_equal(batch.r, again.r)


def test_replay_rejects_non_positive_capacity():
    with pytest.raises(ContractViolation):
        ReplayBuffer(0)


def test_noise_processes_are_seeded():
    a = OUNoise(2, np.random.default_rng(5))
    b = OUNoise(2, np.random.default_rng(5))
    assert np.array_equal([a.sample() for _ in range(10)], [b.sample() for _ in range(10)])
    a.reset()
    assert np.array_equal(a.state, [0.0, 0.0])

    quiet = OUNoise(2, np.random.default_rng(0), sigma=0.0, mu=0.0)
    assert not quiet.sample().any()
    assert GaussianNoise(2, np.random.default_rng(0), sigma=0.0).sample().tolist() == [0.0, 0.0]


def test_select_action_is_deterministic_and_bounded():
    a = Agent(3, SMALL, init_seed=1, noise_seed=2)
    b = Agent(3, SMALL, init_seed=1, noise_seed=2)
    obs = np.array([0.5, -1.0, 2.0])
    for _ in range(20):
        x, y = select_action(a, obs, explore=True), select_action(b, obs, explore=True)
        assert x == y
        assert -1.0 <= x.steer <= 1.0 and -1.0 <= x.accel <= 1.0
    with pytest.raises(ContractViolation):
        select_action(a, np.zeros(4), explore=False)


def test_zero_actor_selects_zero_action():
    agent = Agent(3, SMALL)
    for layer in agent.actor.layers:
        layer.W[:] = 0.0
        layer.b[:] = 0.0
    assert select_action(agent, np.ones(3), explore=False) == Action(0.0, 0.0)


def test_silent_gaussian_noise_does_not_change_the_action():
    agent = Agent(3, SMALL.model_copy(update={"noise": "gaussian", "gaussian_sigma": 0.0}))
    obs = np.array([0.1, 0.2, 0.3])
    assert select_action(agent, obs, explore=True) == select_action(agent, obs, explore=False)


def test_targets_mask_only_terminal_transitions():
    rng = np.random.default_rng(0)
    agent = Agent(3, SMALL)
    batch = random_batch(rng, 6, 3)
    done = Batch(batch.s, batch.a, np.ones(6), batch.s_next, np.ones(6, dtype=bool))
    np.testing.assert_array_equal(critic_targets(done, agent.target_actor, agent.target_critic, 0.99), np.ones(6))
    np.testing.assert_array_equal(critic_targets(batch, agent.target_actor, agent.target_critic, 0.0), batch.r)


def test_targets_match_a_per_row_loop():
    rng = np.random.default_rng(1)
    agent = Agent(3, SMALL)
    batch = random_batch(rng, 10, 3)
    targets = critic_targets(batch, agent.target_actor, agent.target_critic, 0.95)
    for i in range(10):
        a_next, _ = forward(agent.target_actor, batch.s_next[i])
        q_next, _ = forward(agent.target_critic, np.concatenate([batch.s_next[i], a_next]))
        expected = batch.r[i] + (0.0 if batch.done[i] else 0.95 * q_next[0])
        assert targets[i] == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_critic_loss_by_hand():
    critic = MlpParams([LayerParams(np.array([[1.0, 1.0, 1.0]]), np.array([0.0]), Activation.LINEAR)])
    batch = Batch(
        s=np.array([[1.0], [2.0]]),
        a=np.array([[0.0, 0.0], [1.0, 1.0]]),
        r=np.zeros(2),
        s_next=np.zeros((2, 1)),
        done=np.ones(2, dtype=bool),
    )
    loss, grads = critic_loss_and_grads(critic, batch, np.zeros(2))
    # q = [1, 4]; loss = (1 + 16) / 2.
    assert loss == 8.5
    np.testing.assert_allclose(grads.layers[0].dW, [[9.0, 4.0, 4.0]])
    np.testing.assert_allclose(grads.layers[0].db, [5.0])


def _critic_with_margin(rng, inputs_fn, obs_dim: int) -> MlpParams:
    while True:
        critic = init_mlp([obs_dim + 2, 4, 1], ["relu", "linear"], seed=int(rng.integers(1 << 31)))
        critic.layers[0].b[:] = rng.normal(scale=0.3, size=4)
        _, cache = forward(critic, inputs_fn())
        if relu_margin(critic, cache) > 1e-4:
            return critic


def test_critic_gradients_match_finite_differences():
    rng = np.random.default_rng(2)
    batch = random_batch(rng, 8, 3)
    targets = rng.normal(size=8)
    critic = _critic_with_margin(rng, lambda: np.hstack([batch.s, batch.a]), 3)

    _, grads = critic_loss_and_grads(critic, batch, targets)
    numeric = numeric_param_grads(critic, lambda: critic_loss_and_grads(critic, batch, targets)[0])
    assert_grads_close(grads.flat(), numeric)


def test_actor_gradients_match_finite_differences():
    rng = np.random.default_rng(3)
    states = rng.normal(size=(8, 3))
    while True:
        actor = init_mlp([3, 4, 2], ["relu", "tanh"], seed=int(rng.integers(1 << 31)))
        actor.layers[0].b[:] = rng.normal(scale=0.3, size=4)
        _, actor_cache = forward(actor, states)
        if relu_margin(actor, actor_cache) > 1e-4:
            break
    actions, _ = forward(actor, states)
    critic = _critic_with_margin(rng, lambda: np.hstack([states, actions]), 3)

    _, grads = actor_objective_and_grads(actor, critic, states)
    numeric = numeric_param_grads(actor, lambda: actor_objective_and_grads(actor, critic, states)[0])
    assert_grads_close(grads.flat(), numeric)


def test_action_blind_critic_leaves_the_actor_alone():
    rng = np.random.default_rng(4)
    agent = Agent(3, SMALL)
    agent.critic.layers[0].W[:, 3:] = 0.0
    before = agent.actor.copy()
    critic_before = agent.critic.copy()

    _, grads = actor_objective_and_grads(agent.actor, agent.critic, rng.normal(size=(5, 3)))
    assert not grads.flat().any()

    actor_update(agent, random_batch(rng, 5, 3))
    for old, new in zip(before.layers, agent.actor.layers):
        assert np.array_equal(old.W, new.W)
        assert np.array_equal(old.b, new.b)
    for old, new in zip(critic_before.layers, agent.critic.layers):
        assert np.array_equal(old.W, new.W)


def _peaked_critic(obs_dim: int) -> MlpParams:
    """Q(s, a) = -|a0 - 0.5| - |a1 - 0.5| from four relu hinges; blind to the state."""
    W1 = np.zeros((4, obs_dim + 2))
    W1[0, obs_dim], W1[1, obs_dim] = 1.0, -1.0
    W1[2, obs_dim + 1], W1[3, obs_dim + 1] = 1.0, -1.0
    b1 = np.array([-0.5, 0.5, -0.5, 0.5])
    return MlpParams(
        [
            LayerParams(W1, b1, Activation.RELU),
            LayerParams(-np.ones((1, 4)), np.zeros(1), Activation.LINEAR),
        ]
    )


def test_actor_update_climbs_to_the_critic_peak():
    rng = np.random.default_rng(12)
    agent = Agent(3, AgentConfig(actor_hidden=[], critic_hidden=[4], lr_actor=5e-3))
    actor = MlpParams([LayerParams(rng.uniform(-0.5, 0.5, (2, 3)), np.zeros(2), Activation.TANH)])
    critic = _peaked_critic(3)
    agent.load_networks(actor, critic, actor.copy(), critic.copy())

    states = rng.normal(size=(8, 3))
    batch = Batch(states, np.zeros((8, 2)), np.zeros(8), states, np.zeros(8, dtype=bool))
    first = actor_update(agent, batch)
    for _ in range(999):
        last = actor_update(agent, batch)

    assert last > first
    mu, _ = forward(agent.actor, states)
    np.testing.assert_allclose(mu, 0.5, atol=0.05)
    assert np.array_equal(agent.critic.layers[0].W, critic.layers[0].W)


def test_critic_update_leaves_the_actor_alone():
    agent = Agent(3, SMALL)
    before = agent.actor.copy()
    critic_before = agent.critic.copy()
    critic_update(agent, random_batch(np.random.default_rng(5), 5, 3))
    for old, new in zip(before.layers, agent.actor.layers):
        assert np.array_equal(old.W, new.W)
    assert not np.array_equal(critic_before.layers[0].W, agent.critic.layers[0].W)


def test_soft_update_moves_targets_slowly():
    agent = Agent(3, SMALL)
    online = init_mlp(agent.critic.dims, agent.critic.activations, seed=99)
    blended = soft_update(agent.target_critic, online, 0.001)
    expected = 0.001 * online.layers[0].W + 0.999 * agent.target_critic.layers[0].W
    np.testing.assert_allclose(blended.layers[0].W, expected, rtol=1e-12, atol=1e-15)


def test_train_step_waits_for_warmup():
    agent = Agent(3, SMALL)
    rng = np.random.default_rng(6)
    for i in range(SMALL.warmup_steps - 1):
        agent.remember(transition(float(i), rng=rng))
        assert not train_step(agent).ready
    agent.remember(transition(1.0, rng=rng))
    metrics = train_step(agent)
    assert metrics.ready
    assert np.isfinite(metrics.critic_loss)
    assert np.isfinite(metrics.mean_q)


def test_training_is_reproducible():
    agents = []
    for _ in range(2):
        agent = Agent(3, SMALL, init_seed=3, noise_seed=4, sample_seed=5)
        rng = np.random.default_rng(7)
        for i in range(30):
            agent.remember(transition(float(i % 4), rng=rng, done=i % 10 == 9))
            train_step(agent)
        agents.append(agent)
    a, b = agents
    for net in ("actor", "critic", "target_actor", "target_critic"):
        for la, lb in zip(getattr(a, net).layers, getattr(b, net).layers):
            assert np.array_equal(la.W, lb.W), net
            assert np.array_equal(la.b, lb.b), net


def test_linear_critic_regression_converges():
    rng = np.random.default_rng(8)
    config = AgentConfig(critic_hidden=[], lr_critic=1e-3, batch_size=64)
    agent = Agent(4, config)
    s, a = rng.normal(size=(64, 4)), rng.uniform(-1, 1, (64, 2))
    w = rng.uniform(-0.5, 0.5, 6)
    # Terminal transitions make the regression target exactly r.
    batch = Batch(s, a, np.hstack([s, a]) @ w + 0.3, s, np.ones(64, dtype=bool))

    first = critic_update(agent, batch)
    for _ in range(1999):
        last = critic_update(agent, batch)
    assert last <= 0.1 * first


def _value_iteration(gamma: float) -> dict[tuple[int, int], float]:
    # (state, action) -> (next_state, reward); action 0 is a=+1, action 1 is a=-1.
    mdp = {(0, 0): (1, 1.0), (0, 1): (0, 0.0), (1, 0): (0, 0.0), (1, 1): (1, 0.5)}
    q = {k: 0.0 for k in mdp}
    for _ in range(2000):
        q = {k: r + gamma * max(q[(nxt, 0)], q[(nxt, 1)]) for k, (nxt, r) in mdp.items()}
    return q


def test_critic_recovers_q_values_of_a_small_mdp():
    gamma = 0.9
    q_star = _value_iteration(gamma)
    assert q_star[(0, 0)] == pytest.approx(5.5)
    assert q_star[(1, 1)] == pytest.approx(5.0)

    config = AgentConfig(gamma=gamma, lr_critic=2e-3, tau_soft=0.05, actor_hidden=[], critic_hidden=[32, 32], warmup_steps=0, batch_size=32)
    agent = Agent(2, config, init_seed=0)
    # A fixed greedy actor: +1 in state 0, -1 in state 1.
    greedy = MlpParams([LayerParams(np.array([[20.0, -20.0], [0.0, 0.0]]), np.zeros(2), Activation.TANH)])
    agent.actor, agent.target_actor = greedy, greedy.copy()

    states = np.eye(2)
    mdp = {(0, 1.0): (1, 1.0), (0, -1.0): (0, 0.0), (1, 1.0): (0, 0.0), (1, -1.0): (1, 0.5)}
    for (s, a), (nxt, r) in mdp.items():
        for _ in range(100):
            agent.remember(Transition(states[s], np.array([a, 0.0]), r, states[nxt], False))

    for _ in range(8000):
        critic_update(agent, agent.buffer.sample(config.batch_size, agent.rng))
        agent.target_critic = soft_update(agent.target_critic, agent.critic, config.tau_soft)

    greedy_actions, _ = forward(agent.actor, states)
    q_greedy, _ = forward(agent.critic, np.hstack([states, greedy_actions]))
    assert q_greedy[0, 0] == pytest.approx(q_star[(0, 0)], abs=0.1)
    assert q_greedy[1, 0] == pytest.approx(q_star[(1, 1)], abs=0.1)

    q_other, _ = forward(agent.critic, np.array([[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 1.0, 0.0]]))
    assert q_other[0, 0] == pytest.approx(q_star[(0, 1)], abs=0.1)
    assert q_other[1, 0] == pytest.approx(q_star[(1, 0)], abs=0.1)


def test_agent_checkpoint_round_trip(tmp_path):
    agent = Agent(3, SMALL, init_seed=4)
    path = tmp_path / "agent.ckpt"
    save_agent_checkpoint(agent, path, {"speed": "v_max"})
    restored = load_agent_checkpoint(path)
    assert restored.manifest.obs_dim == 3
    assert restored.manifest.config == SMALL
    assert restored.manifest.feature_scales == {"speed": "v_max"}

    x = np.random.default_rng(0).normal(size=(4, 3))
    assert np.array_equal(forward(agent.actor, x)[0], forward(restored.actor, x)[0])

    other = Agent(3, SMALL, init_seed=9)
    other.load_networks(restored.actor, restored.critic, restored.target_actor, restored.target_critic)
    assert np.array_equal(forward(other.actor, x)[0], forward(agent.actor, x)[0])

    with pytest.raises(ContractViolation):
        Agent(3, AgentConfig(actor_hidden=[7])).load_networks(
            restored.actor, restored.critic, restored.target_actor, restored.target_critic
        )


def test_agent_checkpoint_errors(tmp_path):
    agent = Agent(3, SMALL)
    path = tmp_path / "agent.ckpt"
    save_agent_checkpoint(agent, path, {})
    buf = path.read_bytes()

    for name, data in (("short", buf[:6]), ("cut", buf[:-3]), ("long", buf + b"\0\0"), ("magic", b"X" * 8 + buf[8:])):
        bad = tmp_path / name
        bad.write_bytes(data)
        with pytest.raises(CheckpointError):
            load_agent_checkpoint(bad)
    with pytest.raises(CheckpointError):
        load_agent_checkpoint(tmp_path / "absent.ckpt")
