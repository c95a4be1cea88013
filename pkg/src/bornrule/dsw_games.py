"""Game values and the axiom-driven weight derivation.

The derivation is constructive: for a rational ``c**2 = p/q`` it builds
the ancilla that flattens the state into ``q`` equal components, checks
that the amplitudes really are equal, applies the permutation-symmetry
result, and coarse-grains back to the two spin outcomes. Each check is
recorded in a :class:`Derivation` trace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import AxiomConflictError, ConfigurationError, UnsupportedError
from .quantum_model import (
    MINUS,
    Angle,
    AncillaSpec,
    MeasurementSetup,
    SpinAmplitudes,
    amplitudes_from_angle,
    apply_ancilla,
    born_weights,
)
from .weights import SUM_TOL, Number, WeightVector, is_exact

__all__ = [
    "AxiomSet",
    "Derivation",
    "WeightVector",
    "game_value",
    "rotated_value",
    "derive_symmetric_weights",
    "derive",
    "derive_weights_rational",
    "derive_weight_function",
    "value_of_setup",
]

ZERO_TOL = SUM_TOL


@dataclass(frozen=True)
class AxiomSet:
    """Assumptions available to the derivation.

    Exactly one of ``measurement_neutrality`` and ``branch_counting`` must
    be set before anything can be derived; there is deliberately no default
    between the two.
    """

    phase_invariance: bool = True
    permutation_symmetry: bool = True
    ancilla_composition: bool = True
    measurement_neutrality: bool = False
    continuity: bool = True
    branch_counting: bool = False

    @classmethod
    def neutrality(cls) -> "AxiomSet":
        return cls(measurement_neutrality=True)

    @classmethod
    def counting(cls) -> "AxiomSet":
        return cls(branch_counting=True)

    def check(self, need_continuity: bool = False) -> None:
        if self.measurement_neutrality and self.branch_counting:
            raise AxiomConflictError(
                "axiom conflict: measurement neutrality and branch counting are mutually exclusive")
        if not (self.measurement_neutrality or self.branch_counting):
            raise AxiomConflictError(
                "axiom conflict: one of measurement neutrality or branch counting is required")
        missing = [name for name in ("phase_invariance", "permutation_symmetry",
                                     "ancilla_composition")
                   if not getattr(self, name)]
        if need_continuity and not self.continuity:
            missing.append("continuity")
        if missing:
            raise AxiomConflictError("axiom conflict: missing " + ", ".join(missing))

    @property
    def rule(self) -> str:
        return "neutrality" if self.measurement_neutrality else "branch-count"


@dataclass
class Derivation:
    """Result of a derivation plus the steps that justified it."""

    weights: Optional[WeightVector]
    rule: str
    ancilla: Optional[AncillaSpec] = None
    checks: list = field(default_factory=list)

    def record(self, name: str, passed: bool) -> None:
        self.checks.append((name, bool(passed)))
        if not passed:
            raise AssertionError(f"derivation step failed: {name}")

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def game_value(weights: WeightVector, rewards: Sequence) -> Number:
    """Expected reward ``sum(w_i * x_i)``. Exact if both sides are exact."""
    rewards = tuple(rewards)
    if len(rewards) != len(weights):
        raise ConfigurationError(
            f"arity mismatch: {len(weights)} weights, {len(rewards)} rewards")
    if any(not is_exact(x) and not math.isfinite(x) for x in rewards):
        raise ConfigurationError("rewards must be finite")
    if weights.exact and all(is_exact(x) for x in rewards):
        return sum((w * Fraction(x) for w, x in zip(weights, rewards)), Fraction(0))
    return math.fsum(float(w) * float(x) for w, x in zip(weights, rewards))


def rotated_value(weights: WeightVector, rewards: Sequence) -> Number:
    """Value after turning the magnet through pi: the two weights trade places."""
    if len(weights) != 2:
        raise UnsupportedError("rotated_value is defined for two outcomes only")
    return game_value(weights.swapped(), rewards)


def derive_symmetric_weights(m: int) -> WeightVector:
    """Weights forced by invariance under every exchange of ``m`` equal channels.

    For any pair ``(i, j)`` the value must not change when ``x_i`` and
    ``x_j`` are swapped, which forces ``w_i == w_j``; normalization then
    fixes each at ``1/m``. The swap condition is verified for the result.
    """
    if not isinstance(m, int) or m < 1:
        raise ConfigurationError(f"outcome count must be >= 1, got {m!r}")
    w = WeightVector.uniform(m)
    probe = list(range(1, m + 1))
    base = game_value(w, probe)
    for i in range(1, m):
        swapped = probe.copy()
        swapped[0], swapped[i] = swapped[i], swapped[0]
        assert game_value(w, swapped) == base
    return w


def _degenerate(plus_only: bool) -> WeightVector:
    return WeightVector((Fraction(1), Fraction(0)) if plus_only else (Fraction(0), Fraction(1)))


def _branch_count_weights(state: SpinAmplitudes, ancilla: Optional[AncillaSpec]) -> WeightVector:
    """Occupied-branch ratio; zero-amplitude channels spawn no branches."""
    k_plus, k_minus = ancilla.as_tuple() if ancilla else (1, 1)
    n_plus = 0 if _is_zero(state.plus_sq) else k_plus
    n_minus = 0 if _is_zero(state.minus_sq) else k_minus
    total = n_plus + n_minus
    return WeightVector((Fraction(n_plus, total), Fraction(n_minus, total)))


def _is_zero(sq: Number) -> bool:
    return sq == 0 if is_exact(sq) else abs(sq) <= ZERO_TOL


def derive(p_over_q, axioms: AxiomSet, ancilla: Optional[AncillaSpec] = None) -> Derivation:
    """Derive the two outcome weights for a state with ``c**2 = p/q``."""
    axioms.check()
    r = Fraction(p_over_q)
    if r < 0 or r > 1:
        raise ConfigurationError(f"c^2 must lie in [0, 1], got {r}")
    state = SpinAmplitudes.from_cos_squared(r)

    if axioms.branch_counting:
        d = Derivation(_branch_count_weights(state, ancilla), axioms.rule, ancilla)
        d.record("branches counted over occupied channels", True)
        return d

    if r in (0, 1):
        d = Derivation(_degenerate(r == 1), axioms.rule, None)
        d.record("single occupied channel", True)
        return d

    p, q = r.numerator, r.denominator
    spec = AncillaSpec(p, q - p)
    d = Derivation(None, axioms.rule, spec)
    expanded = apply_ancilla(state, spec)
    d.record(f"ancilla ({p},{q - p}) yields {q} components", len(expanded.components) == q)
    d.record("equal squared amplitudes", expanded.equal_weights())
    # sign differences among components are phases, removable by phase invariance
    d.record("phases removable", axioms.phase_invariance)
    symmetric = derive_symmetric_weights(q)
    d.record("permutation symmetry gives uniform component weights",
             all(w == Fraction(1, q) for w in symmetric))
    # only the minus weight is summed; plus follows from normalization, so
    # additivity of weights is not assumed
    w_minus = sum(w for w, c in zip(symmetric, expanded.components) if c.label == MINUS)
    d.weights = WeightVector((1 - w_minus, w_minus))
    d.record("neutrality carries weights to the bare measurement", axioms.measurement_neutrality)
    d.record("agrees with squared amplitudes", d.weights == born_weights(state))
    return d


def derive_weights_rational(p_over_q, axioms: AxiomSet,
                            ancilla: Optional[AncillaSpec] = None) -> WeightVector:
    return derive(p_over_q, axioms, ancilla).weights


def derive_weight_function(theta: Angle, axioms: AxiomSet,
                           ancilla: Optional[AncillaSpec] = None) -> WeightVector:
    """Weights at an arbitrary angle.

    Exact rational points go through :func:`derive`; anywhere else the
    neutrality rule extends by continuity to ``(cos**2, sin**2)``, while
    branch counting gives the multiplicity ratio whatever the angle.
    """
    axioms.check(need_continuity=True)
    state = amplitudes_from_angle(theta)
    if state.exact:
        return derive(state.plus_sq, axioms, ancilla).weights
    if axioms.branch_counting:
        return _branch_count_weights(state, ancilla)
    return born_weights(state)


def value_of_setup(setup: MeasurementSetup, rewards: Sequence, axioms: AxiomSet) -> Number:
    weights = derive_weight_function(setup.angle, axioms, setup.ancilla)
    return game_value(weights, rewards)
