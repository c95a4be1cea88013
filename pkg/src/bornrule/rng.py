"""Counter-addressable random stream built on SplitMix64.

The value for trial ``i`` under seed ``s`` is the SplitMix64 output at
position ``i``::

    state = s + (i + 1) * 0x9E3779B97F4A7C15   (mod 2**64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

so any trial can be generated without touching the others. Results are
therefore identical under any parallel schedule and across both kernel
backends. The algorithm is part of the public contract and must not change.

Bernoulli draws compare the top 53 bits of the word against an integer
threshold ``floor(p * 2**53)`` computed exactly from ``p``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Real

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
UNIT_BITS = 53
UNIT = 1 << UNIT_BITS


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def trial_word(seed: int, index: int) -> int:
    """64-bit output for trial ``index`` of the stream keyed by ``seed``."""
    return mix64(seed + (index + 1) * GAMMA)


def derive_seed(seed: int, *path: int) -> int:
    """Child seed for a named sub-stream (e.g. one per Monte-Carlo stage)."""
    s = seed & MASK64
    for p in path:
        s = mix64(s ^ mix64(p + GAMMA))
    return s


def bernoulli_threshold(p: Real) -> int:
    """Integer threshold ``T`` with ``P(top53 < T) = T / 2**53 ~= p``.

    Computed with exact rational arithmetic so the same ``p`` gives the
    same ``T`` on every platform. Floats are converted exactly.
    """
    q = Fraction(p)
    if q < 0 or q > 1:
        raise ValueError(f"probability out of range: {p!r}")
    return (q.numerator * UNIT) // q.denominator


def check_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise TypeError("seed must be an integer")
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


class CounterRNG:
    """Stateful cursor over a counter-addressable stream.

    ``counter`` is the index of the next trial word. Advancing is the only
    mutation; two cursors with equal ``(seed, counter)`` produce equal output.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int, counter: int = 0):
        self.seed = check_seed(seed)
        self.counter = counter

    def next_word(self) -> int:
        w = trial_word(self.seed, self.counter)
        self.counter += 1
        return w

    def bernoulli(self, threshold: int) -> bool:
        return (self.next_word() >> (64 - UNIT_BITS)) < threshold

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` via multiply-shift on one word."""
        if n < 1:
            raise ValueError("n must be >= 1")
        return (self.next_word() * n) >> 64

    def __repr__(self) -> str:
        return f"CounterRNG(seed={self.seed}, counter={self.counter})"
