from dataclasses import dataclass

import numpy as np

from app.errors import ContractViolation
from app.nn.mlp import Gradients, LayerGrad, LayerParams, MlpParams


@dataclass
class AdamState:
    m: Gradients
    v: Gradients
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, params: MlpParams, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> "AdamState":
        return cls(Gradients.zeros_like(params), Gradients.zeros_like(params), 0, beta1, beta2, eps)


def adam_step(params: MlpParams, grads: Gradients, state: AdamState, lr: float) -> tuple[MlpParams, AdamState]:
    """Bias-corrected Adam descent step; returns new parameters and a new state."""
    if len(grads.layers) != len(params.layers) or len(state.m.layers) != len(params.layers):
        raise ContractViolation("gradient/optimizer layout does not match the network")

    t = state.t + 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1**t
    correction2 = 1.0 - b2**t

    layers, m_layers, v_layers = [], [], []
    for layer, g, m, v in zip(params.layers, grads.layers, state.m.layers, state.v.layers):
        new = {}
        for name, p, dp, mp, vp in (("W", layer.W, g.dW, m.dW, v.dW), ("b", layer.b, g.db, m.db, v.db)):
            if dp.shape != p.shape:
                raise ContractViolation(f"gradient shape {dp.shape} != parameter shape {p.shape}")
            m_new = b1 * mp + (1.0 - b1) * dp
            v_new = b2 * vp + (1.0 - b2) * dp * dp
            step = lr * (m_new / correction1) / (np.sqrt(v_new / correction2) + state.eps)
            new[name] = (p - step, m_new, v_new)
        layers.append(LayerParams(new["W"][0], new["b"][0], layer.activation))
        m_layers.append(LayerGrad(new["W"][1], new["b"][1]))
        v_layers.append(LayerGrad(new["W"][2], new["b"][2]))

    new_state = AdamState(Gradients(m_layers), Gradients(v_layers), t, b1, b2, state.eps)
    return MlpParams(layers), new_state
