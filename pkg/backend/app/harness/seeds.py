import hashlib

import numpy as np

STREAMS = ("env", "noise", "init", "sampling")


def rng_split(master_seed: int, label: str) -> int:
    """64-bit seed for the stream ``label``, derived from the master seed by a keyed hash."""
    digest = hashlib.blake2b(f"{master_seed}/{label}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def stream(master_seed: int, label: str) -> np.random.Generator:
    return np.random.default_rng(rng_split(master_seed, label))
