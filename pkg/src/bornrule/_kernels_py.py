"""Pure-Python Bernoulli counting kernels.

Reference implementation of the hot loops; :mod:`bornrule._kernels_c`
must agree with it bit for bit.
"""
from __future__ import annotations

from collections.abc import Sequence

from .rng import GAMMA, MASK64, MIX1, MIX2, UNIT_BITS

_SHIFT = 64 - UNIT_BITS


def count_below(seed: int, start: int, n: int, threshold: int) -> int:
    """Number of trials ``start .. start+n-1`` whose top 53 bits fall below ``threshold``."""
    hits = 0
    state = (seed + (start + 1) * GAMMA) & MASK64
    for _ in range(n):
        z = state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        z ^= z >> 31
        if (z >> _SHIFT) < threshold:
            hits += 1
        state = (state + GAMMA) & MASK64
    return hits


def batch_counts(seed: int, start: int, batch_size: int,
                 thresholds: Sequence[int]) -> list[int]:
    """Per-batch hit counts; batch ``j`` covers trials
    ``start + j*batch_size`` onwards and uses ``thresholds[j]``."""
    return [count_below(seed, start + j * batch_size, batch_size, t)
            for j, t in enumerate(thresholds)]
