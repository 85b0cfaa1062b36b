import numpy as np
from typing import Union

Key = Union[int, str]


def _key_entropy(part: Key) -> int:
    """Map a task-key component to a non-negative integer."""
    if isinstance(part, str):
        return int.from_bytes(part.encode("utf-8"), "little")
    return part if part >= 0 else (1 << 64) + part


def make_rng(seed: int) -> np.random.Generator:
    """Seeded 64-bit PCG64 stream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def task_rng(seed: int, *key: Key) -> np.random.Generator:
    """
    Independent stream for one task, derived from the run seed and a task key
    such as ("torsion", p, a2, a4, a6, l, j). Identical keys give identical
    streams regardless of which worker runs the task.
    """
    entropy = [_key_entropy(seed)] + [_key_entropy(k) for k in key]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def random_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrarily large bound."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    if bound <= 2 ** 62:
        return int(rng.integers(0, bound))
    # rejection sampling on 64-bit limbs
    bits = (bound - 1).bit_length()
    limbs = (bits + 62) // 63
    while True:
        words = rng.integers(0, 2 ** 63, size=limbs, dtype=np.int64)
        value = 0
        for w in words:
            value = (value << 63) | int(w)
        value &= (1 << bits) - 1
        if value < bound:
            return value
