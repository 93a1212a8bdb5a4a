from .adam import AdamState, adam_step
from .checkpoint import decode_mlp, encode_mlp, header_size, load_checkpoint, save_checkpoint
from .mlp import (
    Activation,
    ForwardCache,
    Gradients,
    LayerGrad,
    LayerParams,
    MlpParams,
    backward,
    forward,
    init_mlp,
    soft_blend,
)

__all__ = [
    "Activation",
    "AdamState",
    "ForwardCache",
    "Gradients",
    "LayerGrad",
    "LayerParams",
    "MlpParams",
    "adam_step",
    "backward",
    "decode_mlp",
    "encode_mlp",
    "forward",
    "header_size",
    "init_mlp",
    "load_checkpoint",
    "save_checkpoint",
    "soft_blend",
]
