"""Classical two-stage games and a generic measurement-neutrality check.

A :class:`TwoStageProcess` emits a coarse label (stage one), optionally
passes it through a refinement that turns it into several equally likely
sub-outcomes, and then an observer reads off one result:

``FOLLOW_ONE_BALL``
    a single object travels through both stages (the C-mode box, the
    Copenhagen rabbits). Refinement cannot change the coarse odds.
``DRAW_FROM_RECEPTACLE``
    every label in the stage-one support emits, the refinement multiplies
    what it emits, and the observer draws uniformly from the pile (the
    E-mode box, the Everettian rabbits).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .dsw_games import game_value
from .errors import ConfigurationError
from .rng import CounterRNG, check_seed
from .weights import Number, WeightVector, total_variation

BLACK = "black"
WHITE = "white"


class SelectionRule(str, enum.Enum):
    FOLLOW_ONE_BALL = "follow-one-ball"
    DRAW_FROM_RECEPTACLE = "draw-from-receptacle"


class BallMode(str, enum.Enum):
    C = "C"
    E = "E"


class DrawTime(str, enum.Enum):
    BEFORE_BIRTH = "before-birth"
    AFTER_BIRTH = "after-birth"


class RabbitMode(str, enum.Enum):
    COPENHAGEN = "copenhagen"
    EVERETT = "everett"


@dataclass(frozen=True)
class TwoStageProcess:
    stage1: Mapping[str, Fraction]
    refinement: Mapping[str, int]
    rule: SelectionRule

    def __post_init__(self):
        stage1 = {k: Fraction(v) for k, v in self.stage1.items()}
        if not stage1:
            raise ConfigurationError("stage1 must have at least one label")
        if any(v < 0 for v in stage1.values()) or sum(stage1.values()) != 1:
            raise ConfigurationError(f"stage1 must be a distribution, got {stage1}")
        refinement = {k: self.refinement.get(k, 1) for k in stage1}
        extra = set(self.refinement) - set(stage1)
        if extra:
            raise ConfigurationError(f"refinement has unknown labels {sorted(extra)}")
        for k, r in refinement.items():
            if not isinstance(r, int) or isinstance(r, bool) or r < 1:
                raise ConfigurationError(f"refinement[{k!r}] must be a positive integer")
        object.__setattr__(self, "stage1", stage1)
        object.__setattr__(self, "refinement", refinement)
        object.__setattr__(self, "rule", SelectionRule(self.rule))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.stage1)

    def unrefined(self) -> "TwoStageProcess":
        return TwoStageProcess(self.stage1, {k: 1 for k in self.stage1}, self.rule)


@dataclass(frozen=True)
class NeutralityResult:
    holds: bool
    gap: Fraction


def coarse_distribution(process: TwoStageProcess) -> WeightVector:
    """Exact probability of each coarse label as the observer sees it."""
    if process.rule is SelectionRule.FOLLOW_ONE_BALL:
        # the ball picks a label, then one of r sub-channels with prob 1/r each
        probs = [sum(process.stage1[k] / process.refinement[k]
                     for _ in range(process.refinement[k]))
                 for k in process.labels]
    else:
        emitted = {k: (process.refinement[k] if process.stage1[k] > 0 else 0)
                   for k in process.labels}
        total = sum(emitted.values())
        probs = [Fraction(emitted[k], total) for k in process.labels]
    return WeightVector(tuple(probs), process.labels)


def neutrality_check(process: TwoStageProcess) -> NeutralityResult:
    """Compare coarse odds with and without the refinement stage."""
    gap = total_variation(coarse_distribution(process.unrefined()).weights,
                          coarse_distribution(process).weights)
    return NeutralityResult(gap == 0, Fraction(gap))


def ball_game(mode, with_ancilla_box: bool) -> TwoStageProcess:
    """The two-port box: upper port black, lower port white.

    In C mode one ball leaves, three times as often from the upper port.
    In E mode both ports emit a ball every round. The ancillary box turns
    each upper-port ball into three.
    """
    mode = BallMode(mode)
    refinement = {BLACK: 3 if with_ancilla_box else 1, WHITE: 1}
    if mode is BallMode.C:
        return TwoStageProcess({BLACK: Fraction(3, 4), WHITE: Fraction(1, 4)},
                               refinement, SelectionRule.FOLLOW_ONE_BALL)
    return TwoStageProcess({BLACK: Fraction(1, 2), WHITE: Fraction(1, 2)},
                           refinement, SelectionRule.DRAW_FROM_RECEPTACLE)


def ball_game_distribution(mode, with_ancilla_box: bool) -> WeightVector:
    return coarse_distribution(ball_game(mode, with_ancilla_box))


@dataclass(frozen=True)
class RabbitScenario:
    """Rabbit game configuration.

    Copenhagen: ``hat`` holds the rabbits by colour, exactly one of them
    (chosen uniformly) is pregnant with a single baby. Everett: one
    pregnant rabbit per colour in ``litters``, each carrying that many.
    """

    mode: RabbitMode
    draw_time: DrawTime
    litters: Mapping[str, int] = field(default_factory=lambda: {BLACK: 3, WHITE: 1})
    hat: Mapping[str, int] = field(default_factory=lambda: {BLACK: 3, WHITE: 1})

    def __post_init__(self):
        object.__setattr__(self, "mode", RabbitMode(self.mode))
        object.__setattr__(self, "draw_time", DrawTime(self.draw_time))
        for name in ("litters", "hat"):
            m = dict(getattr(self, name))
            if set(m) != {BLACK, WHITE} or any(
                    not isinstance(v, int) or v < 1 for v in m.values()):
                raise ConfigurationError(f"{name} must give a positive integer for black and white")
            object.__setattr__(self, name, m)

    def process(self) -> TwoStageProcess:
        labels = (BLACK, WHITE)
        if self.mode is RabbitMode.COPENHAGEN:
            total = sum(self.hat.values())
            stage1 = {k: Fraction(self.hat[k], total) for k in labels}
            refinement = {k: 1 for k in labels}
            return TwoStageProcess(stage1, refinement, SelectionRule.FOLLOW_ONE_BALL)
        stage1 = {k: Fraction(1, 2) for k in labels}
        refinement = (dict(self.litters) if self.draw_time is DrawTime.AFTER_BIRTH
                      else {k: 1 for k in labels})
        return TwoStageProcess(stage1, refinement, SelectionRule.DRAW_FROM_RECEPTACLE)


def rabbit_game_value(scenario: RabbitScenario, rewards: Sequence) -> Number:
    """Expected payout ``w_b*x_b + w_w*x_w`` for rewards ``(x_b, x_w)``."""
    return game_value(coarse_distribution(scenario.process()), rewards)


def rabbit_neutrality(mode) -> NeutralityResult:
    """Does waiting for the births change the odds? (default litters 3:1)"""
    before = coarse_distribution(RabbitScenario(mode, DrawTime.BEFORE_BIRTH).process())
    after = coarse_distribution(RabbitScenario(mode, DrawTime.AFTER_BIRTH).process())
    gap = Fraction(total_variation(before.weights, after.weights))
    return NeutralityResult(gap == 0, gap)


def simulate_process(process: TwoStageProcess, n_rounds: int, seed: int,
                     rng: Optional[CounterRNG] = None) -> dict[str, int]:
    """Play ``n_rounds`` rounds mechanically and tally coarse labels.

    FOLLOW_ONE_BALL uses two words per round (label, then sub-channel);
    DRAW_FROM_RECEPTACLE fills the receptacle and draws one ball.
    """
    if n_rounds < 1:
        raise ConfigurationError("n_rounds must be >= 1")
    rng = rng or CounterRNG(check_seed(seed))
    labels = process.labels
    tally = {k: 0 for k in labels}
    if process.rule is SelectionRule.FOLLOW_ONE_BALL:
        # cumulative stage-1 thresholds on a common denominator
        den = math.lcm(*(p.denominator for p in process.stage1.values()))
        cuts, acc = [], 0
        for k in labels:
            acc += process.stage1[k].numerator * (den // process.stage1[k].denominator)
            cuts.append(acc)
        for _ in range(n_rounds):
            u = rng.below(den)
            label = next(k for k, c in zip(labels, cuts) if u < c)
            rng.below(process.refinement[label])  # sub-channel, not observed coarsely
            tally[label] += 1
    else:
        receptacle = [k for k in labels if process.stage1[k] > 0
                      for _ in range(process.refinement[k])]
        for _ in range(n_rounds):
            tally[receptacle[rng.below(len(receptacle))]] += 1
    return tally
