"""Seed derivation for reproducible, independent random streams.

Every stream is ``PCG64(SeedSequence(master, spawn_key=(tag, *indices)))``:
the master seed is mixed with a purpose tag and any indices (slot, iteration,
network, probe) by numpy's SeedSequence hashing, so distinct purposes never
share a stream and the same key always reproduces the same draws.
"""

from __future__ import annotations

import numpy as np

TOPOLOGY = 1
RANDOM_ACCESS = 2
CSMA = 3
CHURN = 4
PROBE = 5

_U64 = 2 ** 64


def _check(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return seed


def bit_generator(seed: int, *key: int) -> np.random.PCG64:
    return np.random.PCG64(np.random.SeedSequence(_check(seed), spawn_key=tuple(int(k) for k in key)))


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(bit_generator(seed, *key))


def derive_seed(seed: int, *key: int) -> int:
    ss = np.random.SeedSequence(_check(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def uniforms_at(seed: int, tag: int, slot_index: int, n: int) -> np.ndarray:
    """Row ``slot_index`` of the ``(slots, n)`` uniform block drawn from stream ``(seed, tag)``.

    PCG64 spends one 64-bit output per double, so advancing by
    ``slot_index * n`` lands exactly on the requested row.
    """
    bg = bit_generator(seed, tag)
    bg.advance(int(slot_index) * int(n))
    return np.random.Generator(bg).random(n)
