import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bornrule.errors import ConfigurationError
from bornrule.quantum_model import MINUS, PLUS, Angle, AncillaSpec, MeasurementSetup
from bornrule.rng import CounterRNG
from bornrule.samplers import (Semantics, SemanticsKind, neutrality_gap, outcome_distribution,
                               randomizer_scenario, run_experiment, sample_trial)

F = Fraction
PI3 = Angle.parse("pi/3")


def setup(theta="pi/3", ancilla=None):
    return MeasurementSetup(Angle.parse(theta), AncillaSpec.parse(ancilla) if ancilla else None)


def test_distributions_at_pi_over_3():
    assert outcome_distribution(setup(), Semantics.copenhagen()).weights == (F(3, 4), F(1, 4))
    assert outcome_distribution(setup(), Semantics.everett_count()).weights == (F(1, 2), F(1, 2))
    assert outcome_distribution(setup(ancilla="3,1"),
                                Semantics.everett_count()).weights == (F(3, 4), F(1, 4))
    assert outcome_distribution(setup(), Semantics.born_weighted()).weights == (F(3, 4), F(1, 4))


@given(k1=st.integers(1, 20), k2=st.integers(1, 20), r=st.fractions(0, 1))
def test_born_weighted_equals_copenhagen(k1, k2, r):
    from bornrule.quantum_model import SpinAmplitudes
    theta = Angle(2 * math.acos(math.sqrt(r)))
    s = MeasurementSetup(theta, AncillaSpec(k1, k2))
    a = outcome_distribution(s, Semantics.born_weighted())
    b = outcome_distribution(s, Semantics.copenhagen())
    assert all(math.isclose(x, y, abs_tol=1e-12) for x, y in zip(a.as_floats(), b.as_floats()))


def test_semantics_parse():
    assert Semantics.parse("Everett-Count").kind is SemanticsKind.EVERETT_COUNT
    with pytest.raises(ConfigurationError):
        Semantics.parse("many-minds")


def test_conflicting_multiplicities():
    with pytest.raises(ConfigurationError):
        outcome_distribution(setup(ancilla="3,1"), Semantics.everett_count(AncillaSpec(2, 1)))
    same = outcome_distribution(setup(ancilla="3,1"), Semantics.everett_count(AncillaSpec(3, 1)))
    assert same.weights == (F(3, 4), F(1, 4))


def test_degenerate_angles():
    for sem in (Semantics.copenhagen(), Semantics.everett_count(), Semantics.born_weighted()):
        assert run_experiment(setup("0"), sem, 10, (1, 0), 1).fraction_plus == 1.0
        assert run_experiment(setup("pi"), sem, 10, (1, 0), 1).fraction_plus == 0.0


def test_sample_trial_consumes_one_word():
    rng = CounterRNG(4)
    outs = [sample_trial(setup(), Semantics.copenhagen(), rng) for _ in range(200)]
    assert rng.counter == 200
    assert set(outs) == {PLUS, MINUS}
    hits = run_experiment(setup(), Semantics.copenhagen(), 200, (1, 0), 4).count_plus
    assert outs.count(PLUS) == hits


@pytest.mark.parametrize("sem,ancilla,p", [
    (Semantics.copenhagen(), None, 0.75),
    (Semantics.everett_count(), None, 0.5),
    (Semantics.everett_count(), "3,1", 0.75),
    (Semantics.born_weighted(), "3,1", 0.75),
])
def test_sampling_within_5_sigma(sem, ancilla, p):
    n = 50_000
    stats = run_experiment(setup(ancilla=ancilla), sem, n, (1, 0), 2024)
    assert stats.count_plus + stats.count_minus == n
    assert abs(stats.fraction_plus - p) < 5 * math.sqrt(p * (1 - p) / n)
    assert stats.mean_reward == stats.fraction_plus


def test_mean_reward():
    stats = run_experiment(setup(), Semantics.copenhagen(), 1000, (3, -1), 5)
    assert math.isclose(stats.mean_reward, (3 * stats.count_plus - stats.count_minus) / 1000)


def test_run_experiment_validation():
    with pytest.raises(ConfigurationError):
        run_experiment(setup(), Semantics.copenhagen(), 0, (1, 0), 1)
    with pytest.raises(ConfigurationError):
        run_experiment(setup(), Semantics.copenhagen(), 10, (1,), 1)
    with pytest.raises(ValueError):
        run_experiment(setup(), Semantics.copenhagen(), 10, (1, 0), -1)


@settings(max_examples=40)
@given(k1=st.integers(1, 12), k2=st.integers(1, 12))
def test_copenhagen_is_neutral(k1, k2):
    assert neutrality_gap(MeasurementSetup(PI3), AncillaSpec(k1, k2), Semantics.copenhagen()) == 0


def test_everett_gap():
    gap = neutrality_gap(MeasurementSetup(PI3), AncillaSpec(3, 1), Semantics.everett_count())
    assert gap == F(1, 4)
    assert neutrality_gap(MeasurementSetup(PI3), AncillaSpec(1, 1), Semantics.everett_count()) == 0
    with pytest.raises(ConfigurationError):
        neutrality_gap(setup(ancilla="3,1"), AncillaSpec(3, 1), Semantics.everett_count())


def test_randomizer():
    assert randomizer_scenario(1).weights == (F(1, 2), F(1, 2))
    assert randomizer_scenario(10**6).plus == F(10**6, 10**6 + 1)
    with pytest.raises(ConfigurationError):
        randomizer_scenario(0)
