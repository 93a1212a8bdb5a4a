import numpy as np

from app.nn import Activation
from app.sensors import D_MAX, N_SECTORS, Observation
from app.sim import VehicleState, WorldState


def ego_world(x=50.0, y=0.0, heading=0.0, speed=10.0, opponents=()) -> WorldState:
    return WorldState(ego=VehicleState(x, y, heading, speed), opponents=tuple(opponents))


def make_obs(speed=10.0, angle=0.0, track_pos=0.0, opponents=None) -> Observation:
    ranges = np.full(N_SECTORS, D_MAX) if opponents is None else np.asarray(opponents, dtype=np.float64)
    return Observation(speed * np.cos(angle), speed, angle, track_pos, ranges)


def numeric_param_grads(params, objective, h: float = 1e-6) -> np.ndarray:
    """Central differences of ``objective()`` over every parameter, in ``Gradients.flat`` order."""
    out = []
    for layer in params.layers:
        for arr in (layer.W, layer.b):
            flat = arr.reshape(-1)
            for i in range(flat.size):
                orig = flat[i]
                flat[i] = orig + h
                plus = objective()
                flat[i] = orig - h
                minus = objective()
                flat[i] = orig
                out.append((plus - minus) / (2.0 * h))
    return np.array(out)


def numeric_input_grad(objective, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    x = np.array(x, dtype=np.float64)
    flat = x.reshape(-1)
    grad = np.zeros_like(flat)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        plus = objective(x)
        flat[i] = orig - h
        minus = objective(x)
        flat[i] = orig
        grad[i] = (plus - minus) / (2.0 * h)
    return grad.reshape(x.shape)


def assert_grads_close(analytic, numeric, rel: float = 1e-5, floor: float = 1e-8) -> None:
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    assert analytic.shape == numeric.shape
    diff = np.abs(analytic - numeric)
    scale = np.maximum(np.abs(analytic), np.abs(numeric))
    bad = ~((diff <= floor) | (diff <= rel * scale))
    assert not bad.any(), f"{bad.sum()} gradient entries off; worst diff {diff.max():.3e}"


def relu_margin(params, cache) -> float:
    """Smallest |pre-activation| over the relu layers of a forward pass."""
    margin = np.inf
    for layer, h_in in zip(params.layers, cache.inputs):
        if layer.activation is Activation.RELU:
            z = h_in @ layer.W.T + layer.b
            margin = min(margin, float(np.abs(z).min()))
    return margin
