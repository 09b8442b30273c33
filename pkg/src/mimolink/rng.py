"""Deterministic substream management for all random draws.

Every random quantity in the package comes from a counter-based generator
keyed by ``(master_seed, purpose, index)``.  The key fully determines the
stream, so a draw can be replayed bit-for-bit without any carried state and
Monte-Carlo work can be sharded across processes without changing a single
output byte.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

# Purpose tags keep independent uses of the same master seed from colliding.
RAYLEIGH = 1
AWGN = 2
FADING = 3
SYMBOLS = 4


def substream(master_seed: int, purpose: int, index: int) -> np.random.Generator:
    """Return the generator bound to one (seed, purpose, index) key."""
    if master_seed < 0 or purpose < 0 or index < 0:
        raise DomainError("substream keys must be nonnegative integers")
    seq = np.random.SeedSequence(master_seed, spawn_key=(purpose, index))
    return np.random.Generator(np.random.Philox(seq))


def complex_normal(rng: np.random.Generator, rows: int, cols: int,
                   variance: float) -> np.ndarray:
    """Draw an i.i.d. circularly-symmetric complex Gaussian matrix.

    Each entry is CN(0, variance): real and imaginary parts independent,
    each with variance ``variance / 2``.  Real parts are drawn first, then
    imaginary parts, so the draw order is part of the replay contract.
    """
    if variance < 0:
        raise DomainError(f"variance must be nonnegative, got {variance}")
    scale = np.sqrt(variance / 2.0)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return scale * (re + 1j * im)
