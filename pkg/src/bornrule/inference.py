"""Recovering the apparatus angle from counts, and signalling with it.

One party sets the magnet angle for each block of ``N`` particles; the
receiver sees only how many of the ``N`` came out ``+`` and inverts the
Born relation ``M/N ~ cos**2(theta/2)``. Under branch-count semantics the
observed fraction carries no information about the angle, so the channel
degrades to guessing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .errors import ConfigurationError
from .quantum_model import Angle, MeasurementSetup
from .rng import check_seed
from .samplers import Semantics, plus_threshold

TIE_TOL = 1e-12


@dataclass(frozen=True)
class ThetaEstimate:
    theta_hat: float
    m: int
    n: int


@dataclass(frozen=True)
class ChannelConfig:
    alphabet: tuple[Angle, ...]
    particles_per_symbol: int
    message_length: int
    semantics: Semantics
    seed: int

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if not alphabet:
            raise ConfigurationError("alphabet must be non-empty")
        thetas = [a.theta for a in alphabet]
        if len(set(thetas)) != len(thetas):
            raise ConfigurationError("alphabet angles must be distinct")
        if any(not 0.0 < t < math.pi for t in thetas) and len(alphabet) > 1:
            raise ConfigurationError("alphabet angles must lie in (0, pi)")
        if not isinstance(self.particles_per_symbol, int) or self.particles_per_symbol < 1:
            raise ConfigurationError("particles_per_symbol must be >= 1")
        if not isinstance(self.message_length, int) or self.message_length < 0:
            raise ConfigurationError("message_length must be >= 0")
        check_seed(self.seed)
        object.__setattr__(self, "alphabet", alphabet)


@dataclass(frozen=True)
class DecodeReport:
    symbol_error_rate: float
    sent: tuple[int, ...]
    decoded: tuple[int, ...]
    estimates: tuple[ThetaEstimate, ...]
    confusion: tuple[tuple[int, ...], ...]


def estimate_theta(m: int, n: int) -> ThetaEstimate:
    """Invert the Born relation: ``theta_hat = 2 * arccos(sqrt(M/N))``."""
    if n < 1:
        raise ConfigurationError("N must be >= 1")
    if not 0 <= m <= n:
        raise ConfigurationError(f"M must lie in [0, N], got M={m}, N={n}")
    if m == n:
        theta = 0.0
    elif m == 0:
        theta = math.pi
    else:
        theta = 2.0 * math.acos(math.sqrt(m / n))
    return ThetaEstimate(theta, m, n)


def decode_symbol(estimate: ThetaEstimate, alphabet: Sequence[Angle]) -> int:
    """Index of the nearest alphabet angle; near-ties go to the lower index."""
    if not alphabet:
        raise ConfigurationError("alphabet must be non-empty")
    best, best_d = 0, abs(estimate.theta_hat - alphabet[0].theta)
    for i, a in enumerate(alphabet[1:], start=1):
        d = abs(estimate.theta_hat - a.theta)
        if d < best_d - TIE_TOL:
            best, best_d = i, d
    return best


def run_channel(config: ChannelConfig, message: Sequence[int]) -> DecodeReport:
    """Send ``message`` one block of ``N`` particles per symbol and decode each block.

    Block ``j`` uses trial indices ``j*N .. (j+1)*N - 1`` of the seeded
    stream, so the report depends only on ``(config, message)``.
    """
    message = tuple(message)
    k = len(config.alphabet)
    if len(message) != config.message_length:
        raise ConfigurationError(
            f"message has {len(message)} symbols, config says {config.message_length}")
    for pos, sym in enumerate(message):
        if not isinstance(sym, int) or not 0 <= sym < k:
            raise ConfigurationError(f"message[{pos}] = {sym!r} is not a valid alphabet index")

    n = config.particles_per_symbol
    thresholds_by_symbol = [plus_threshold(MeasurementSetup(a), config.semantics)
                            for a in config.alphabet]
    counts = kernels.batch_counts(config.seed, 0, n,
                                  [thresholds_by_symbol[s] for s in message])
    estimates = tuple(estimate_theta(m, n) for m in counts)
    decoded = tuple(decode_symbol(e, config.alphabet) for e in estimates)
    confusion = [[0] * k for _ in range(k)]
    for s, d in zip(message, decoded):
        confusion[s][d] += 1
    errors = sum(1 for s, d in zip(message, decoded) if s != d)
    rate = errors / len(message) if message else 0.0
    return DecodeReport(rate, message, decoded, estimates,
                        tuple(tuple(row) for row in confusion))
