"""Agent checkpoints: a JSON manifest followed by four network blocks.

Layout, little-endian::

    magic          8 bytes  b"RACEAGT\\0"
    version        u8
    manifest_len   u32
    manifest       UTF-8 JSON (AgentManifest)
    blocks         actor, critic, target_actor, target_critic (app.nn checkpoint format)

Optimizer moments are not stored; a resumed agent restarts Adam.
"""

import struct
from dataclasses import dataclass
from pathlib import Path

from pydantic import BaseModel, ValidationError

from app.ddpg.agent import Agent, AgentConfig
from app.errors import CheckpointError
from app.nn import MlpParams, decode_mlp, encode_mlp

MAGIC = b"RACEAGT\x00"
VERSION = 1
_PREAMBLE = struct.Struct("<8sBI")
BLOCKS = ("actor", "critic", "target_actor", "target_critic")


class AgentManifest(BaseModel):
    obs_dim: int
    actor_dims: list[int]
    critic_dims: list[int]
    feature_scales: dict[str, str]
    config: AgentConfig
    blocks: list[str] = list(BLOCKS)


@dataclass
class AgentCheckpoint:
    manifest: AgentManifest
    actor: MlpParams
    critic: MlpParams
    target_actor: MlpParams
    target_critic: MlpParams


def save_agent_checkpoint(agent: Agent, path: Path, feature_scales: dict[str, str]) -> None:
    manifest = AgentManifest(
        obs_dim=agent.obs_dim,
        actor_dims=agent.actor.dims,
        critic_dims=agent.critic.dims,
        feature_scales=feature_scales,
        config=agent.config,
    )
    header = manifest.model_dump_json().encode()
    parts = [_PREAMBLE.pack(MAGIC, VERSION, len(header)), header]
    parts += [encode_mlp(net) for net in (agent.actor, agent.critic, agent.target_actor, agent.target_critic)]
    Path(path).write_bytes(b"".join(parts))


def load_agent_checkpoint(path: Path) -> AgentCheckpoint:
    try:
        buf = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read agent checkpoint {path}: {e}") from e
    try:
        magic, version, n = _PREAMBLE.unpack_from(buf, 0)
    except struct.error as e:
        raise CheckpointError(f"{path} is truncated inside the preamble") from e
    if magic != MAGIC or version != VERSION:
        raise CheckpointError(f"{path} is not a version {VERSION} agent checkpoint")

    offset = _PREAMBLE.size
    if len(buf) < offset + n:
        raise CheckpointError(f"{path} is truncated inside the manifest")
    try:
        manifest = AgentManifest.model_validate_json(buf[offset : offset + n])
    except ValidationError as e:
        raise CheckpointError(f"bad manifest in {path}: {e}") from e
    offset += n

    nets = []
    for _ in BLOCKS:
        net, offset = decode_mlp(buf, offset)
        nets.append(net)
    if offset != len(buf):
        raise CheckpointError(f"{len(buf) - offset} trailing bytes in {path}")

    actor, critic, target_actor, target_critic = nets
    if actor.dims != manifest.actor_dims or critic.dims != manifest.critic_dims:
        raise CheckpointError(f"network shapes in {path} disagree with its manifest")
    return AgentCheckpoint(manifest, actor, critic, target_actor, target_critic)
