"""Counter-based seed derivation so parallel work is order-independent."""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(seed: int, index: int) -> int:
    """Mix (seed, index) into a well-spread 64-bit stream seed.

    splitmix64-style finalizer: nearby (seed, index) pairs land far apart, and
    the result depends only on the pair, never on evaluation order.
    """
    z = (seed + (index + 1) * _GOLDEN) & _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z
