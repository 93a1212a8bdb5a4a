"""Dense networks with exact reverse-mode gradients.

Inputs are either a single vector ``(n_in,)`` or a batch ``(n, n_in)``. For a
batch, parameter gradients are summed over rows, i.e. they are the gradients of
``sum(output * output_grad)``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from app.errors import ContractViolation

# Largest float below 1.0; keeps tanh outputs strictly inside (-1, 1).
_TANH_LIMIT = np.nextafter(1.0, 0.0)


class Activation(str, Enum):
    RELU = "relu"
    TANH = "tanh"
    LINEAR = "linear"

    @property
    def code(self) -> int:
        return _ACTIVATION_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "Activation":
        for activation, c in _ACTIVATION_CODES.items():
            if c == code:
                return activation
        raise ValueError(f"unknown activation code {code}")


_ACTIVATION_CODES = {Activation.LINEAR: 0, Activation.RELU: 1, Activation.TANH: 2}


@dataclass
class LayerParams:
    W: np.ndarray
    b: np.ndarray
    activation: Activation

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        self.activation = Activation(self.activation)
        if self.W.ndim != 2 or self.b.ndim != 1 or self.W.shape[0] != self.b.shape[0]:
            raise ContractViolation(f"layer shapes W{self.W.shape} b{self.b.shape} do not agree")

    @property
    def in_dim(self) -> int:
        return self.W.shape[1]

    @property
    def out_dim(self) -> int:
        return self.W.shape[0]


@dataclass
class MlpParams:
    layers: list[LayerParams]

    def __post_init__(self):
        if not self.layers:
            raise ContractViolation("a network needs at least one layer")
        for prev, nxt in zip(self.layers, self.layers[1:]):
            if prev.out_dim != nxt.in_dim:
                raise ContractViolation(f"layer out {prev.out_dim} does not feed layer in {nxt.in_dim}")

    @property
    def dims(self) -> list[int]:
        return [self.layers[0].in_dim] + [layer.out_dim for layer in self.layers]

    @property
    def activations(self) -> list[Activation]:
        return [layer.activation for layer in self.layers]

    @property
    def n_params(self) -> int:
        return sum(layer.W.size + layer.b.size for layer in self.layers)

    def copy(self) -> "MlpParams":
        return MlpParams([LayerParams(l.W.copy(), l.b.copy(), l.activation) for l in self.layers])


@dataclass
class LayerGrad:
    dW: np.ndarray
    db: np.ndarray


@dataclass
class Gradients:
    layers: list[LayerGrad]

    @classmethod
    def zeros_like(cls, params: MlpParams) -> "Gradients":
        return cls([LayerGrad(np.zeros_like(l.W), np.zeros_like(l.b)) for l in params.layers])

    def scaled(self, factor: float) -> "Gradients":
        return Gradients([LayerGrad(g.dW * factor, g.db * factor) for g in self.layers])

    def flat(self) -> np.ndarray:
        return np.concatenate([np.concatenate([g.dW.ravel(), g.db]) for g in self.layers])


@dataclass
class ForwardCache:
    params_id: int
    inputs: list[np.ndarray] = field(default_factory=list)
    outputs: list[np.ndarray] = field(default_factory=list)


def init_mlp(
    layer_dims: Sequence[int],
    activations: Sequence[Activation | str],
    seed: int | np.random.SeedSequence,
) -> MlpParams:
    """Fan-in uniform weights in [-1/sqrt(fan_in), 1/sqrt(fan_in)], zero biases."""
    if len(activations) != len(layer_dims) - 1:
        raise ContractViolation("need one activation per layer")
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out, activation in zip(layer_dims, layer_dims[1:], activations):
        bound = 1.0 / np.sqrt(fan_in)
        layers.append(LayerParams(rng.uniform(-bound, bound, (fan_out, fan_in)), np.zeros(fan_out), activation))
    return MlpParams(layers)


def _activate(z: np.ndarray, activation: Activation) -> np.ndarray:
    if activation is Activation.RELU:
        return np.maximum(z, 0.0)
    if activation is Activation.TANH:
        return np.clip(np.tanh(z), -_TANH_LIMIT, _TANH_LIMIT)
    return z


def _activation_grad(out: np.ndarray, activation: Activation) -> np.ndarray:
    """Derivative of the activation, expressed through the layer output."""
    if activation is Activation.RELU:
        return (out > 0.0).astype(np.float64)
    if activation is Activation.TANH:
        return 1.0 - out * out
    return np.ones_like(out)


def forward(params: MlpParams, x) -> tuple[np.ndarray, ForwardCache]:
    h = np.asarray(x, dtype=np.float64)
    if h.shape[-1] != params.layers[0].in_dim or h.ndim > 2:
        raise ContractViolation(f"input shape {h.shape} does not match in-dimension {params.layers[0].in_dim}")
    cache = ForwardCache(params_id=id(params))
    for layer in params.layers:
        cache.inputs.append(h)
        h = _activate(h @ layer.W.T + layer.b, layer.activation)
        cache.outputs.append(h)
    return h, cache


def backward(params: MlpParams, cache: ForwardCache, output_grad) -> tuple[Gradients, np.ndarray]:
    if cache.params_id != id(params) or len(cache.inputs) != len(params.layers):
        raise ContractViolation("forward cache does not belong to these parameters")
    g = np.asarray(output_grad, dtype=np.float64)
    if g.shape != cache.outputs[-1].shape:
        raise ContractViolation(f"output_grad shape {g.shape} != output shape {cache.outputs[-1].shape}")

    grads: list[LayerGrad] = []
    for layer, h_in, h_out in zip(reversed(params.layers), reversed(cache.inputs), reversed(cache.outputs)):
        dz = g * _activation_grad(h_out, layer.activation)
        if dz.ndim == 1:
            grads.append(LayerGrad(np.outer(dz, h_in), dz.copy()))
        else:
            grads.append(LayerGrad(dz.T @ h_in, dz.sum(axis=0)))
        g = dz @ layer.W
    grads.reverse()
    return Gradients(grads), g


def soft_blend(target: MlpParams, online: MlpParams, tau: float) -> MlpParams:
    """Every target parameter becomes ``tau * online + (1 - tau) * target``."""
    if target.dims != online.dims:
        raise ContractViolation(f"cannot blend {target.dims} into {online.dims}")
    return MlpParams(
        [
            LayerParams(tau * o.W + (1.0 - tau) * t.W, tau * o.b + (1.0 - tau) * t.b, t.activation)
            for t, o in zip(target.layers, online.layers)
        ]
    )
