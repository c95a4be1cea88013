"""Exact bookkeeping for the ``2**N`` branches after ``N`` spin measurements.

Branches are grouped by ``m``, the number of ``+`` results. Class ``m``
holds ``C(N, m)`` branches, each carrying Born weight
``c**(2m) * s**(2(N-m))``. Two measures over ``m`` are compared:

* the count measure, ``C(N, m) / 2**N`` (every branch equally likely);
* the Born measure, ``C(N, m) * c**(2m) * s**(2(N-m))``.

With rational ``c**2`` everything is exact. Otherwise per-branch weights
are kept as 40-digit :class:`decimal.Decimal` values (they underflow a
double long before ``N = 10**4``) and class weights are rounded to float
from the same product.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import ConfigurationError, SizeError
from .weights import Number, is_exact, total_variation

MAX_N = 10_000
STD_TOL = 1e-12

_DEC = decimal.Context(prec=40, Emin=-999_999_999, Emax=999_999_999)

PerBranch = Union[Fraction, decimal.Decimal]


@dataclass(frozen=True)
class BranchClass:
    """All branches with ``m`` positive results.

    Exact classes keep an integer numerator over the denominator ``b**N``
    shared by the whole ledger (``c**2 = a/b``); the :class:`Fraction`
    views are built on access so that large ledgers avoid a gcd per class.
    """

    m: int
    count: int
    numerator: Optional[int] = None
    denominator: Optional[int] = None
    approx_per_branch: Optional[decimal.Decimal] = None
    approx_class_weight: Optional[float] = None

    @property
    def exact(self) -> bool:
        return self.numerator is not None

    @property
    def per_branch_weight(self) -> PerBranch:
        if self.exact:
            return Fraction(self.numerator, self.denominator)
        return self.approx_per_branch

    @property
    def class_weight(self) -> Number:
        if self.exact:
            return Fraction(self.count * self.numerator, self.denominator)
        return self.approx_class_weight

    @property
    def class_numerator(self) -> int:
        return self.count * self.numerator


@dataclass(frozen=True)
class LedgerSummary:
    n_trials: int
    c_squared: Number
    born_mean: Number
    born_mode: int
    born_mode_tie: bool
    born_std: float
    count_mode: int
    count_mode_tie: bool
    k: Optional[float] = None
    window: Optional[tuple[int, int]] = None
    born_mass_in_window: Optional[Number] = None
    count_fraction_in_window: Optional[Number] = None


def _check(n: int, c_squared) -> Number:
    if not isinstance(n, int) or isinstance(n, bool):
        raise SizeError("N must be an integer")
    if not 1 <= n <= MAX_N:
        raise SizeError(f"N must lie in [1, {MAX_N}], got {n}")
    c2 = Fraction(c_squared) if is_exact(c_squared) else float(c_squared)
    if not 0 <= c2 <= 1:
        raise ConfigurationError(f"c^2 must lie in [0, 1], got {c_squared}")
    return c2


def enumerate_branch_classes(n: int, c_squared) -> list[BranchClass]:
    """The ``N + 1`` classes, ordered by ``m``."""
    c2 = _check(n, c_squared)
    counts = binomial_row(n)
    if is_exact(c2):
        a, b = c2.numerator, c2.denominator
        den = b ** n
        # successive powers instead of n separate exponentiations
        a_pow, r_pow = [1], [1]
        for _ in range(n):
            a_pow.append(a_pow[-1] * a)
            r_pow.append(r_pow[-1] * (b - a))
        return [BranchClass(m, count, a_pow[m] * r_pow[n - m], den)
                for m, count in enumerate(counts)]

    s2 = 1.0 - c2
    dc2, ds2 = _DEC.create_decimal_from_float(c2), _DEC.create_decimal_from_float(s2)
    out = []
    for m, count in enumerate(counts):
        per = _DEC.multiply(_DEC.power(dc2, m), _DEC.power(ds2, n - m))
        cw = float(_DEC.multiply(_DEC.create_decimal(count), per))
        out.append(BranchClass(m, count, approx_per_branch=per, approx_class_weight=cw))
    return out


def binomial_row(n: int) -> list[int]:
    """``[C(n, 0), ..., C(n, n)]`` by the multiplicative recurrence."""
    row = [1]
    for m in range(n):
        row.append(row[-1] * (n - m) // (m + 1))
    return row


def count_measure(n: int) -> list[Fraction]:
    total = 1 << n
    return [Fraction(c, total) for c in binomial_row(n)]


def _argmax_smallest(values) -> tuple[int, bool]:
    best = max(values)
    hits = [i for i, v in enumerate(values) if v == best]
    return hits[0], len(hits) > 1


def _class_mass(classes: list[BranchClass], subset: list[BranchClass]) -> Number:
    if classes[0].exact:
        return Fraction(sum(c.class_numerator for c in subset), classes[0].denominator)
    return math.fsum(c.class_weight for c in subset)


def total_mass(classes: list[BranchClass]) -> Number:
    """Sum of all class weights; exactly one for rational ``c**2``."""
    return _class_mass(classes, classes)


def born_summary(n: int, c_squared,
                 classes: Optional[list[BranchClass]] = None) -> LedgerSummary:
    """Mode and spread of the Born measure next to the count-measure mode."""
    c2 = _check(n, c_squared)
    classes = classes if classes is not None else enumerate_branch_classes(n, c2)
    if classes[0].exact:
        weights = [c.class_numerator for c in classes]
    else:
        weights = [c.class_weight for c in classes]
    mode, tie = _argmax_smallest(weights)
    s2 = 1 - c2
    std = math.sqrt(float(c2)) * math.sqrt(float(s2)) * math.sqrt(n)
    if abs(std * std - n * float(c2) * float(s2)) > STD_TOL * max(1.0, n):
        raise AssertionError("standard deviation identity violated")
    return LedgerSummary(
        n_trials=n,
        c_squared=c2,
        born_mean=n * c2,
        born_mode=mode,
        born_mode_tie=tie,
        born_std=std,
        count_mode=n // 2,
        count_mode_tie=n % 2 == 1,
    )


def typicality_window(n: int, mean: Number, std: float, k: float) -> tuple[int, int]:
    """Integer ``m`` range inside ``mean +/- k*std``, clipped to ``[0, N]``."""
    mean_f = float(mean)
    lo = max(0, math.ceil(mean_f - k * std))
    hi = min(n, math.floor(mean_f + k * std))
    return lo, hi


def typicality_report(n: int, c_squared, k: float,
                      classes: Optional[list[BranchClass]] = None) -> LedgerSummary:
    """How much of each measure lies within ``k`` Born standard deviations of ``N*c**2``."""
    if not k > 0:
        raise ConfigurationError("k must be positive")
    c2 = _check(n, c_squared)
    classes = classes if classes is not None else enumerate_branch_classes(n, c2)
    summary = born_summary(n, c2, classes)
    lo, hi = typicality_window(n, summary.born_mean, summary.born_std, k)
    inside = classes[lo:hi + 1] if lo <= hi else []
    born_mass = _class_mass(classes, inside)
    count_frac = Fraction(sum(c.count for c in inside), 1 << n)
    return LedgerSummary(
        **{**summary.__dict__,
           "k": k,
           "window": (lo, hi),
           "born_mass_in_window": born_mass,
           "count_fraction_in_window": count_frac},
    )


def measure_divergence(n: int, c_squared) -> Number:
    """Total variation between the count and Born measures over ``m``."""
    classes = enumerate_branch_classes(n, c_squared)
    if classes[0].exact:
        # common denominator lcm(2**n, b**n) keeps this in integers
        den_born = classes[0].denominator
        den = den_born * (1 << n) // math.gcd(den_born, 1 << n)
        fb, fc = den // den_born, den // (1 << n)
        diff = sum(abs(c.class_numerator * fb - c.count * fc) for c in classes)
        return Fraction(diff, 2 * den)
    return total_variation(count_measure(n), [c.class_weight for c in classes])
