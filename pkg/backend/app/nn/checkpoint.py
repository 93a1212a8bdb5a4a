"""Network checkpoint codec.

Layout, little-endian throughout::

    magic        8 bytes  b"RACEMLP\\0"
    version      u8
    n_layers     u32
    per layer    u32 in, u32 out, u8 activation code
    payload      per layer: W row-major (out x in) f64, then b (out) f64
"""

import struct
from pathlib import Path

import numpy as np

from app.errors import CheckpointError
from app.nn.mlp import Activation, LayerParams, MlpParams

MAGIC = b"RACEMLP\x00"
VERSION = 1
_PREAMBLE = struct.Struct("<8sBI")
_LAYER = struct.Struct("<IIB")
_F64 = np.dtype("<f8")


def header_size(n_layers: int) -> int:
    return _PREAMBLE.size + n_layers * _LAYER.size


def encode_mlp(params: MlpParams) -> bytes:
    parts = [_PREAMBLE.pack(MAGIC, VERSION, len(params.layers))]
    parts += [_LAYER.pack(l.in_dim, l.out_dim, l.activation.code) for l in params.layers]
    for layer in params.layers:
        parts.append(np.ascontiguousarray(layer.W, dtype=_F64).tobytes())
        parts.append(np.ascontiguousarray(layer.b, dtype=_F64).tobytes())
    return b"".join(parts)


def decode_mlp(buf: bytes, offset: int = 0) -> tuple[MlpParams, int]:
    """Decode one network block starting at ``offset``; returns it and the offset past it."""
    try:
        magic, version, n_layers = _PREAMBLE.unpack_from(buf, offset)
    except struct.error as e:
        raise CheckpointError("checkpoint truncated inside the header") from e
    if magic != MAGIC:
        raise CheckpointError(f"bad checkpoint magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    if n_layers == 0:
        raise CheckpointError("checkpoint declares no layers")

    offset += _PREAMBLE.size
    shapes = []
    for _ in range(n_layers):
        try:
            n_in, n_out, code = _LAYER.unpack_from(buf, offset)
            activation = Activation.from_code(code)
        except (struct.error, ValueError) as e:
            raise CheckpointError(f"bad layer header: {e}") from e
        shapes.append((n_in, n_out, activation))
        offset += _LAYER.size

    layers = []
    for n_in, n_out, activation in shapes:
        need = (n_out * n_in + n_out) * _F64.itemsize
        if len(buf) - offset < need:
            raise CheckpointError("checkpoint truncated inside the weights")
        W = np.frombuffer(buf, dtype=_F64, count=n_out * n_in, offset=offset).reshape(n_out, n_in)
        offset += W.nbytes
        b = np.frombuffer(buf, dtype=_F64, count=n_out, offset=offset)
        offset += b.nbytes
        layers.append(LayerParams(W.astype(np.float64), b.astype(np.float64), activation))
    try:
        return MlpParams(layers), offset
    except ValueError as e:
        raise CheckpointError(f"checkpoint layers do not chain: {e}") from e


def save_checkpoint(params: MlpParams, path: Path) -> None:
    Path(path).write_bytes(encode_mlp(params))


def load_checkpoint(path: Path) -> MlpParams:
    try:
        buf = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    params, end = decode_mlp(buf)
    if end != len(buf):
        raise CheckpointError(f"{len(buf) - end} trailing bytes after the network in {path}")
    return params
