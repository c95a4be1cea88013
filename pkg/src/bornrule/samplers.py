"""Outcome statistics of the measurement game under competing semantics.

Three outcome-selection rules are modelled:

* ``copenhagen`` collapses at the magnet with Born probabilities; any
  refinement afterwards cannot change the coarse result.
* ``everett-count`` treats every occupied branch as equally likely at the
  moment the observer looks, so the coarse result follows the branch
  multiplicities and ignores the amplitudes.
* ``born-weighted`` also picks a branch, but with probability proportional
  to its squared amplitude.

Every trial consumes exactly one word of the counter-addressed stream in
:mod:`bornrule.rng`, so a run is reproducible from ``(inputs, seed)`` alone
and the compiled and pure-Python kernels give identical counts.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import kernels
from .errors import ConfigurationError
from .quantum_model import (
    IDENTITY_ANCILLA,
    MINUS,
    PLUS,
    Angle,
    AncillaSpec,
    MeasurementSetup,
    born_weights,
)
from .rng import CounterRNG, bernoulli_threshold, check_seed
from .weights import SUM_TOL, WeightVector, is_exact, total_variation

LABELS = (PLUS, MINUS)


class SemanticsKind(str, enum.Enum):
    COPENHAGEN = "copenhagen"
    EVERETT_COUNT = "everett-count"
    BORN_WEIGHTED = "born-weighted"


@dataclass(frozen=True)
class Semantics:
    kind: SemanticsKind
    multiplicities: Optional[AncillaSpec] = None

    @classmethod
    def copenhagen(cls) -> "Semantics":
        return cls(SemanticsKind.COPENHAGEN)

    @classmethod
    def everett_count(cls, multiplicities: Optional[AncillaSpec] = None) -> "Semantics":
        return cls(SemanticsKind.EVERETT_COUNT, multiplicities)

    @classmethod
    def born_weighted(cls, multiplicities: Optional[AncillaSpec] = None) -> "Semantics":
        return cls(SemanticsKind.BORN_WEIGHTED, multiplicities)

    @classmethod
    def parse(cls, kind: str, multiplicities: Optional[AncillaSpec] = None) -> "Semantics":
        try:
            k = SemanticsKind(kind.strip().lower())
        except ValueError:
            choices = ", ".join(s.value for s in SemanticsKind)
            raise ConfigurationError(f"unknown semantics {kind!r} (choose from {choices})") from None
        return cls(k, multiplicities)

    def __str__(self) -> str:
        if self.multiplicities is None:
            return self.kind.value
        return f"{self.kind.value}{self.multiplicities.as_tuple()}"


@dataclass(frozen=True)
class RunStats:
    n_trials: int
    count_plus: int
    count_minus: int
    mean_reward: float

    @property
    def fraction_plus(self) -> float:
        return self.count_plus / self.n_trials


def refinement(setup: MeasurementSetup, semantics: Semantics) -> AncillaSpec:
    """Multiplicities in force: the setup's ancilla or the semantics' own."""
    a, b = setup.ancilla, semantics.multiplicities
    if a is not None and b is not None and a != b:
        raise ConfigurationError(
            f"setup ancilla {a.as_tuple()} conflicts with semantics multiplicities {b.as_tuple()}")
    return a or b or IDENTITY_ANCILLA


def outcome_distribution(setup: MeasurementSetup, semantics: Semantics) -> WeightVector:
    """Exact coarse ``(+, -)`` distribution; rational whenever ``c**2`` is."""
    state = setup.state
    if semantics.kind is SemanticsKind.COPENHAGEN:
        return WeightVector(born_weights(state).weights, LABELS)

    spec = refinement(setup, semantics)
    channels = ((state.plus_sq, spec.k_plus), (state.minus_sq, spec.k_minus))
    if semantics.kind is SemanticsKind.BORN_WEIGHTED:
        # each of the k components of a channel is picked with probability sq/k
        coarse = [_share(sq, k) * k for sq, k in channels]
        return WeightVector(tuple(coarse), LABELS)

    occupied = [0 if _is_zero(sq) else k for sq, k in channels]
    total = sum(occupied)
    return WeightVector(tuple(Fraction(n, total) for n in occupied), LABELS)


def _share(sq, k: int):
    return Fraction(sq) / k if is_exact(sq) else sq / k


def _is_zero(sq) -> bool:
    return sq == 0 if is_exact(sq) else sq <= SUM_TOL


def plus_threshold(setup: MeasurementSetup, semantics: Semantics) -> int:
    return bernoulli_threshold(outcome_distribution(setup, semantics).plus)


def sample_trial(setup: MeasurementSetup, semantics: Semantics, rng: CounterRNG) -> str:
    """Draw one outcome label and advance ``rng`` by one word."""
    return PLUS if rng.bernoulli(plus_threshold(setup, semantics)) else MINUS


def _mean_reward(count_plus: int, count_minus: int, rewards: Sequence) -> float:
    x_plus, x_minus = (float(x) for x in rewards)
    n = count_plus + count_minus
    return math.fsum((count_plus * x_plus, count_minus * x_minus)) / n


def run_experiment(setup: MeasurementSetup, semantics: Semantics, n_trials: int,
                   rewards: Sequence, seed: int) -> RunStats:
    """``n_trials`` independent trials on stream ``seed`` (trial indices ``0..n-1``)."""
    if not isinstance(n_trials, int) or n_trials < 1:
        raise ConfigurationError("n_trials must be a positive integer")
    if len(rewards) != 2:
        raise ConfigurationError("two rewards (x+, x-) are required")
    check_seed(seed)
    hits = kernels.count_below(seed, 0, n_trials, plus_threshold(setup, semantics))
    return RunStats(n_trials, hits, n_trials - hits,
                    _mean_reward(hits, n_trials - hits, rewards))


def neutrality_gap(setup: MeasurementSetup, ancilla: AncillaSpec, semantics: Semantics):
    """Total-variation distance between the coarse distributions with and
    without ``ancilla``; zero means the refinement is irrelevant."""
    if setup.ancilla is not None:
        raise ConfigurationError("neutrality_gap expects a setup without an ancilla")
    bare = dataclasses.replace(semantics, multiplicities=None)
    without = outcome_distribution(setup, bare)
    with_ = outcome_distribution(MeasurementSetup(setup.angle, ancilla), bare)
    return total_variation(without.weights, with_.weights)


def randomizer_scenario(multiplier: int) -> WeightVector:
    """Branch-count odds when the + channel also drives a ``multiplier``-way randomizer."""
    if not isinstance(multiplier, int) or multiplier < 1:
        raise ConfigurationError("multiplier must be a positive integer")
    setup = MeasurementSetup(Angle.of_pi(Fraction(1, 2)), AncillaSpec(multiplier, 1))
    return outcome_distribution(setup, Semantics.everett_count())
