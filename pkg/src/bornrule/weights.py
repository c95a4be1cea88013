"""Normalized weight vectors over a finite set of outcomes."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import ConfigurationError

Number = Union[Fraction, float]

SUM_TOL = 1e-12


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _normalize_entry(x) -> Number:
    if is_exact(x):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class WeightVector:
    """Non-negative weights summing to one, optionally labelled.

    Integer and :class:`~fractions.Fraction` entries are kept exact; the sum
    check is then exact too. Float entries are checked to within 1e-12.
    """

    weights: tuple
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        w = tuple(_normalize_entry(x) for x in self.weights)
        if not w:
            raise ConfigurationError("weight vector must be non-empty")
        if any(x < 0 for x in w):
            raise ConfigurationError(f"negative weight in {w}")
        total = sum(w)
        if all(is_exact(x) for x in w):
            if total != 1:
                raise ConfigurationError(f"weights sum to {total}, not 1")
        elif abs(total - 1.0) > SUM_TOL:
            raise ConfigurationError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", w)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(w):
                raise ConfigurationError("labels and weights differ in length")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def uniform(cls, m: int) -> "WeightVector":
        return cls(tuple(Fraction(1, m) for _ in range(m)))

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.weights)

    @property
    def plus(self) -> Number:
        return self.weights[0]

    @property
    def minus(self) -> Number:
        return self.weights[1]

    def swapped(self) -> "WeightVector":
        if len(self.weights) != 2:
            raise ConfigurationError("swap is defined for two outcomes only")
        return WeightVector(self.weights[::-1], self.labels)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)


def total_variation(p: Sequence[Number], q: Sequence[Number]) -> Number:
    """Half the L1 distance; exact when every entry is exact."""
    if len(p) != len(q):
        raise ConfigurationError("distributions differ in arity")
    diffs = [abs(a - b) for a, b in zip(p, q)]
    if all(is_exact(d) for d in diffs):
        return Fraction(sum(diffs), 2)
    return sum(float(d) for d in diffs) / 2.0
