"""Bit-flip corruption of raw image bytes.

Flips are i.i.d. per bit with probability BER, applied to the 8-bit pixel
bytes before any normalization — the same corrupted realization is scored
by both classifiers, mirroring a single upload forwarded to both hosts.
"""

from __future__ import annotations

import numpy as np


def flip_bits(images: np.ndarray, ber: float,
              rng: np.random.Generator) -> np.ndarray:
    """Return a copy of uint8 ``images`` with each bit flipped w.p. ``ber``."""
    if not 0.0 <= ber < 1.0:
        raise ValueError(f"ber must be in [0, 1), got {ber}")
    if images.dtype != np.uint8:
        raise ValueError("images must be raw uint8 bytes")
    if ber == 0.0:
        return images.copy()
    out = images.copy()
    # one bit plane at a time keeps the mask memory bounded
    for bit in range(8):
        mask = rng.random(images.shape) < ber
        out ^= (mask.astype(np.uint8) << bit)
    return out


def corruption_stream(corrupt_seed: int, grid_index: int) -> np.random.Generator:
    """Independent stream per BER grid point, stable across reruns."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=(corrupt_seed, grid_index)))
