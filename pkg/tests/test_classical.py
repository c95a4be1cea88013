from fractions import Fraction

import pytest

from bornrule.classical import (BLACK, WHITE, RabbitScenario, SelectionRule, TwoStageProcess,
                                ball_game, ball_game_distribution, coarse_distribution,
                                neutrality_check, rabbit_game_value, rabbit_neutrality,
                                simulate_process)
from bornrule.errors import ConfigurationError

F = Fraction


@pytest.mark.parametrize("mode,box,expected", [
    ("C", False, (F(3, 4), F(1, 4))),
    ("C", True, (F(3, 4), F(1, 4))),
    ("E", False, (F(1, 2), F(1, 2))),
    ("E", True, (F(3, 4), F(1, 4))),
])
def test_ball_games(mode, box, expected):
    assert ball_game_distribution(mode, box).weights == expected


def test_ball_neutrality():
    assert neutrality_check(ball_game("C", True)).holds
    r = neutrality_check(ball_game("E", True))
    assert not r.holds and r.gap == F(1, 4)


@pytest.mark.parametrize("mode,draw,value", [
    ("copenhagen", "before-birth", F(3, 4)),
    ("copenhagen", "after-birth", F(3, 4)),
    ("everett", "before-birth", F(1, 2)),
    ("everett", "after-birth", F(3, 4)),
])
def test_rabbit_values(mode, draw, value):
    assert rabbit_game_value(RabbitScenario(mode, draw), (1, 0)) == value


def test_rabbit_value_formulas():
    xb, xw = F(7), F(-2)
    cop = rabbit_game_value(RabbitScenario("copenhagen", "before-birth"), (xb, xw))
    ev = rabbit_game_value(RabbitScenario("everett", "before-birth"), (xb, xw))
    assert cop == (3 * xb + xw) / 4
    assert ev == (xb + xw) / 2


def test_rabbit_neutrality():
    assert rabbit_neutrality("copenhagen").holds
    r = rabbit_neutrality("everett")
    assert not r.holds and r.gap == F(1, 4)


def test_custom_litters():
    s = RabbitScenario("everett", "after-birth", litters={BLACK: 5, WHITE: 2})
    assert coarse_distribution(s.process()).weights == (F(5, 7), F(2, 7))
    with pytest.raises(ConfigurationError):
        RabbitScenario("everett", "after-birth", litters={BLACK: 0, WHITE: 1})


def test_process_validation():
    with pytest.raises(ConfigurationError):
        TwoStageProcess({"a": F(1, 2)}, {}, SelectionRule.FOLLOW_ONE_BALL)
    with pytest.raises(ConfigurationError):
        TwoStageProcess({"a": F(1)}, {"b": 2}, SelectionRule.FOLLOW_ONE_BALL)
    with pytest.raises(ConfigurationError):
        TwoStageProcess({"a": F(1)}, {"a": 0}, SelectionRule.FOLLOW_ONE_BALL)


def test_receptacle_ignores_empty_labels():
    p = TwoStageProcess({"a": F(1), "b": F(0)}, {"a": 2, "b": 5}, SelectionRule.DRAW_FROM_RECEPTACLE)
    assert coarse_distribution(p).weights == (1, 0)


@pytest.mark.parametrize("mode", ["C", "E"])
def test_monte_carlo_matches_exact(mode):
    n = 40_000
    proc = ball_game(mode, True)
    tally = simulate_process(proc, n, seed=12)
    p = 0.75
    assert abs(tally[BLACK] / n - p) < 5 * (p * (1 - p) / n) ** 0.5
    assert tally == simulate_process(proc, n, seed=12)
    with pytest.raises(ConfigurationError):
        simulate_process(proc, 0, seed=1)
