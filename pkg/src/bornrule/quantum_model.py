"""Two-channel spin states, the pi rotation, and ancilla refinement.

Amplitudes are real and signed. Each one is stored as a sign plus its
squared modulus, so weights stay exact rationals whenever the squared
modulus is supplied as a :class:`~fractions.Fraction`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ConfigurationError
from .weights import Number, WeightVector, is_exact

TWO_PI = 2.0 * math.pi
NORM_TOL = 1e-12
PLUS = "+"
MINUS = "-"

# cos(r*pi) for the rational r (mod 2) where it is rational.
_RATIONAL_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): Fraction(0),
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(1): Fraction(-1),
    Fraction(4, 3): Fraction(-1, 2),
    Fraction(3, 2): Fraction(0),
    Fraction(5, 3): Fraction(1, 2),
}


@dataclass(frozen=True)
class Angle:
    """Polar angle of the prepared spin, normalized into ``[0, 2*pi)``.

    ``pi_multiple`` is set when the angle is known exactly as ``r * pi``
    for rational ``r``; it enables exact ``cos**2(theta/2)`` at the points
    where that value is rational.
    """

    theta: float
    pi_multiple: Optional[Fraction] = None

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ConfigurationError(f"angle must be finite, got {self.theta!r}")
        if self.pi_multiple is not None:
            r = Fraction(self.pi_multiple) % 2
            object.__setattr__(self, "pi_multiple", r)
            object.__setattr__(self, "theta", float(r) * math.pi)
        else:
            t = math.fmod(self.theta, TWO_PI) % TWO_PI
            object.__setattr__(self, "theta", 0.0 if t >= TWO_PI else t)

    @classmethod
    def of_pi(cls, r) -> "Angle":
        r = Fraction(r)
        return cls(float(r) * math.pi, r)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Parse ``"pi/3"``, ``"2pi/3"``, ``"2*pi/3"``, ``"-pi"``, ``"0"`` or decimal radians."""
        s = text.strip().replace(" ", "").lower()
        m = re.fullmatch(r"([+-]?)(\d+(?:/\d+)?)?\*?(pi|π)(?:/(\d+))?", s)
        if m:
            sign, coef, _, den = m.groups()
            r = Fraction(coef) if coef else Fraction(1)
            if den:
                if int(den) == 0:
                    raise ConfigurationError(f"zero denominator in angle {text!r}")
                r /= int(den)
            return cls.of_pi(-r if sign == "-" else r)
        try:
            value = float(s)
        except ValueError:
            raise ConfigurationError(f"cannot parse angle {text!r}") from None
        if value == 0.0:
            return cls.of_pi(0)
        return cls(value)

    def cos_squared_half(self) -> Number:
        """``cos**2(theta/2)``; exact when the angle is a rational multiple of pi
        with rational cosine."""
        if self.pi_multiple is not None and self.pi_multiple in _RATIONAL_COS:
            return (1 + _RATIONAL_COS[self.pi_multiple]) / 2
        return math.cos(self.theta / 2.0) ** 2

    def __str__(self) -> str:
        if self.pi_multiple is not None:
            r = self.pi_multiple
            if r == 0:
                return "0"
            num = "" if r.numerator == 1 else str(r.numerator)
            return f"{num}pi" + ("" if r.denominator == 1 else f"/{r.denominator}")
        return repr(self.theta)


@dataclass(frozen=True)
class AncillaSpec:
    """Number of equally weighted ancilla components per outcome channel."""

    k_plus: int
    k_minus: int

    def __post_init__(self):
        for name in ("k_plus", "k_minus"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "AncillaSpec":
        try:
            a, b = (int(x) for x in text.replace(":", ",").split(","))
        except ValueError:
            raise ConfigurationError(f"ancilla must look like 'k+,k-', got {text!r}") from None
        return cls(a, b)

    @property
    def total(self) -> int:
        return self.k_plus + self.k_minus

    def as_tuple(self) -> tuple[int, int]:
        return (self.k_plus, self.k_minus)


IDENTITY_ANCILLA = AncillaSpec(1, 1)


def _check_unit(total: Number, what: str):
    if is_exact(total):
        if total != 1:
            raise ConfigurationError(f"{what} not normalized: {total}")
    elif abs(total - 1.0) > NORM_TOL:
        raise ConfigurationError(f"{what} not normalized: {total!r}")


@dataclass(frozen=True)
class SpinAmplitudes:
    """``plus_amp * alpha + minus_amp * beta`` as (sign, squared modulus) pairs."""

    plus_sq: Number
    minus_sq: Number
    plus_sign: int = 1
    minus_sign: int = 1

    def __post_init__(self):
        if self.plus_sq < 0 or self.minus_sq < 0:
            raise ConfigurationError("squared amplitudes must be non-negative")
        if self.plus_sign not in (1, -1) or self.minus_sign not in (1, -1):
            raise ConfigurationError("signs must be +1 or -1")
        _check_unit(self.plus_sq + self.minus_sq, "spin state")

    @classmethod
    def from_values(cls, a_plus: float, a_minus: float) -> "SpinAmplitudes":
        return cls(a_plus * a_plus, a_minus * a_minus,
                   -1 if a_plus < 0 else 1, -1 if a_minus < 0 else 1)

    @classmethod
    def from_cos_squared(cls, c2: Number) -> "SpinAmplitudes":
        """Non-negative amplitudes with ``a_plus**2 = c2``."""
        if is_exact(c2):
            c2 = Fraction(c2)
            return cls(c2, 1 - c2)
        c2 = float(c2)
        return cls(c2, 1.0 - c2)

    @property
    def a_plus(self) -> float:
        return self.plus_sign * math.sqrt(self.plus_sq)

    @property
    def a_minus(self) -> float:
        return self.minus_sign * math.sqrt(self.minus_sq)

    @property
    def exact(self) -> bool:
        return is_exact(self.plus_sq) and is_exact(self.minus_sq)

    def flip_sign(self, channel: str) -> "SpinAmplitudes":
        if channel == PLUS:
            return SpinAmplitudes(self.plus_sq, self.minus_sq, -self.plus_sign, self.minus_sign)
        return SpinAmplitudes(self.plus_sq, self.minus_sq, self.plus_sign, -self.minus_sign)


@dataclass(frozen=True)
class Component:
    label: str
    index: int
    sign: int
    squared: Number

    @property
    def amplitude(self) -> float:
        return self.sign * math.sqrt(self.squared)


@dataclass(frozen=True)
class ExpandedState:
    components: tuple[Component, ...]

    def __post_init__(self):
        _check_unit(sum(c.squared for c in self.components), "expanded state")

    def squared_by_label(self) -> dict[str, Number]:
        out: dict[str, Number] = {PLUS: 0, MINUS: 0}
        for c in self.components:
            out[c.label] = out[c.label] + c.squared
        return out

    def count(self, label: str) -> int:
        return sum(1 for c in self.components if c.label == label)

    def equal_weights(self) -> bool:
        """True when every component carries the same squared amplitude
        (exactly for rationals, within 1e-12 otherwise)."""
        sq = [c.squared for c in self.components]
        if all(is_exact(x) for x in sq):
            return len(set(sq)) == 1
        return max(sq) - min(sq) <= NORM_TOL


@dataclass(frozen=True)
class MeasurementSetup:
    angle: Angle
    ancilla: Optional[AncillaSpec] = None

    @property
    def state(self) -> SpinAmplitudes:
        return amplitudes_from_angle(self.angle)


def amplitudes_from_angle(theta: Angle) -> SpinAmplitudes:
    """``(cos(theta/2), sin(theta/2))``, exact squares when available."""
    c2 = theta.cos_squared_half()
    half = theta.theta / 2.0
    c_sign = -1 if math.cos(half) < 0 else 1
    s_sign = -1 if math.sin(half) < 0 else 1
    if is_exact(c2):
        return SpinAmplitudes(c2, 1 - c2, c_sign, s_sign)
    return SpinAmplitudes(c2, math.sin(half) ** 2, c_sign, s_sign)


def rotate_pi(state: SpinAmplitudes) -> SpinAmplitudes:
    """Rotate the magnet by pi: ``(c, s) -> (-s, c)``."""
    return SpinAmplitudes(state.minus_sq, state.plus_sq, -state.minus_sign, state.plus_sign)


def apply_ancilla(state: SpinAmplitudes, spec: AncillaSpec) -> ExpandedState:
    """Split each channel into equally weighted ancilla components."""
    comps = []
    for label, sq, sign, k in ((PLUS, state.plus_sq, state.plus_sign, spec.k_plus),
                               (MINUS, state.minus_sq, state.minus_sign, spec.k_minus)):
        share = sq / k if is_exact(sq) else sq / float(k)
        if is_exact(share):
            share = Fraction(share)
        comps.extend(Component(label, i, sign, share) for i in range(k))
    return ExpandedState(tuple(comps))


def born_weights(state: SpinAmplitudes) -> WeightVector:
    """Squared moduli ``(c**2, s**2)``."""
    return WeightVector((state.plus_sq, state.minus_sq))
