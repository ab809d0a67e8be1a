"""Deterministic per-trial random streams."""

import hashlib

import numpy as np


def derive_seed(master_seed: int, *labels) -> int:
    """
    Derive a 64-bit seed from a master seed and any number of labels.

    The derivation is a hash, so trials can run in any order and still
    draw the same numbers.
    """
    digest = hashlib.blake2b(digest_size=8)
    digest.update(str(int(master_seed)).encode("utf-8"))
    for label in labels:
        digest.update(b"/")
        digest.update(str(label).encode("utf-8"))
    return int.from_bytes(digest.digest(), "big")


def trial_rng(master_seed: int, *labels) -> np.random.Generator:
    """Return a numpy Generator seeded by derive_seed(master_seed, *labels)."""
    return np.random.default_rng(derive_seed(master_seed, *labels))
