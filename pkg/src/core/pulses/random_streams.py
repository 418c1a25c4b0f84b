"""
Counter-based random streams for Monte Carlo ensembles.

Draws come from Philox keyed by the run seed. Sample indices are grouped in
blocks of BLOCK_SIZE; block k uses the counter k·2^192, so the three
variates of sample i depend only on (seed, i) and never on how samples are
split between workers.
"""

from typing import Tuple

import numpy as np

from ..errors import ValidationError

BLOCK_SIZE = 4096
_BLOCK_STRIDE = 1 << 192


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Generator positioned at the start of one block."""
    if seed < 0 or seed >= 1 << 128:
        raise ValidationError(f"seed must lie in [0, 2**128), got {seed}")
    return np.random.Generator(np.random.Philox(key=seed, counter=block * _BLOCK_STRIDE))


def draw_block(seed: int, block: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uniform p_eps, uniform p_nz and standard-normal z for one block."""
    gen = block_generator(seed, block)
    p_eps = gen.random(BLOCK_SIZE)
    p_nz = gen.random(BLOCK_SIZE)
    z = gen.standard_normal(BLOCK_SIZE)
    return p_eps, p_nz, z


def draw_samples(seed: int, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Variates of samples start..stop−1."""
    if not 0 <= start <= stop:
        raise ValidationError(f"invalid sample range [{start}, {stop})")

    parts = []
    for block in range(start // BLOCK_SIZE, (stop + BLOCK_SIZE - 1) // BLOCK_SIZE):
        lo = max(start, block * BLOCK_SIZE) - block * BLOCK_SIZE
        hi = min(stop, (block + 1) * BLOCK_SIZE) - block * BLOCK_SIZE
        parts.append(tuple(v[lo:hi] for v in draw_block(seed, block)))

    if not parts:
        empty = np.empty(0)
        return empty, empty, empty
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))
