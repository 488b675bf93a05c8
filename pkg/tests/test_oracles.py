"""Brute-force references used to check the solvers."""
import random
from fractions import Fraction

import pytest

from aegames.game import P1, P2, GameGraph, ObjectiveSpec, random_game
from aegames.oracles import (OracleBudgetError, config_graph, countdown_solve, enumerate_moore_winners,
                             exhaustive_lasso_opt, machine_wins, memoryless_winner, minimax_memoryless,
                             profile_count, simple_lassos, subset_sum_brute)
from aegames.reductions import FIG5A, FIG8, CountdownGame, SubsetSumInstance, memory_family
from aegames.strategy import MooreStrategy
from aegames.values import NEG_INF, POS_INF

F = Fraction


def test_minimax_on_figures(fig1_left, fig2a):
    assert minimax_memoryless(fig1_left, "AE")[0] == 3
    assert minimax_memoryless(fig2a.with_init(fig2a.index("s'")), "AE")[0] == F(1, 2)
    assert minimax_memoryless(fig1_left, "MP")[0] == 0
    with pytest.raises(ValueError):
        minimax_memoryless(fig1_left, "XX")


def test_minimax_and_lasso_search_agree_on_one_player_games():
    rng = random.Random(31)
    for i in range(60):
        g = random_game(rng.randint(1, 4), 3, 1.0, (1, 2), 2100 + i)
        for kind in ("MP", "AE"):
            assert minimax_memoryless(g, kind)[0] == exhaustive_lasso_opt(g, kind).value
        g2 = g.swapped_owners()
        assert minimax_memoryless(g2, "AE")[0] == exhaustive_lasso_opt(g2, "AE").value


def test_bounded_search_on_fig3(fig3):
    opt = exhaustive_lasso_opt(fig3, "AELU", {"U": 3})
    assert opt.value == 1
    assert opt.witness.cycle == tuple(fig3.index(x) for x in "acaab")
    assert exhaustive_lasso_opt(fig3, "AELU", {"U": 2}).value == POS_INF
    assert exhaustive_lasso_opt(fig3, "AEL", {"cap": 8}).value == 1


def test_infinite_values():
    down = GameGraph.build([("x", P1)], [("x", "x", -1)], "x")
    assert exhaustive_lasso_opt(down, "AE").value == NEG_INF
    assert minimax_memoryless(down.swapped_owners(), "AE")[0] == NEG_INF


def test_budgets(fig1_left):
    with pytest.raises(OracleBudgetError):
        minimax_memoryless(random_game(12, 2, 0.5, (2, 2), 1), "AE", budget=100)
    with pytest.raises(OracleBudgetError):
        list(simple_lassos(lambda s: (0, 1), 0, 1))
    with pytest.raises(OracleBudgetError):
        exhaustive_lasso_opt(memory_family(FIG5A, 3), "AEL", {"cap": 50}, budget=10)
    assert profile_count(fig1_left) == 1
    with pytest.raises(ValueError):
        exhaustive_lasso_opt(memory_family(FIG8), "AE")


def test_simple_lassos_and_configurations():
    succ = {0: (1,), 1: (0, 1)}
    assert list(simple_lassos(succ.__getitem__, 0, 10)) == [([], [0, 1]), ([0], [1])]
    nodes, nxt = config_graph(memory_family(FIG5A, 1), 1)
    assert nodes == [(0, 0), (1, 1), (0, 1)]
    assert nxt == {0: [1], 1: [2], 2: [0]}


def test_memoryless_winner(fig8):
    # the opponent can idle at energy 1
    assert memoryless_winner(fig8, ObjectiveSpec("AE", 1)) == "WIN"
    assert memoryless_winner(fig8, ObjectiveSpec("AE", F(1, 2))) == "LOSE"
    assert memoryless_winner(fig8, ObjectiveSpec("EGLU", upper=0)) == "LOSE"


def test_zero_loop_needs_one_memory_state():
    g = GameGraph.build([("x", P1)], [("x", "x", 0)], "x")
    k, machine = enumerate_moore_winners(g, ObjectiveSpec("AELU", 0, upper=0), 3)
    assert k == 1 and machine.size == 1


def test_counting_machines():
    g = memory_family(FIG5A, 2)
    k, machine = enumerate_moore_winners(g, ObjectiveSpec("EGLU", upper=2), 4)
    assert k == 3
    assert machine_wins(g, machine, ObjectiveSpec("EGLU", upper=2))
    assert enumerate_moore_winners(g, ObjectiveSpec("EGLU", upper=2), 2) == (None, None)


def test_opponent_machines(fig8):
    k, machine = enumerate_moore_winners(fig8, ObjectiveSpec("AEL", 1), 3, player=P2)
    assert k == 2 and machine.player == P2
    # "always drop to s3" is a one-state opponent, and it loses
    stay = {(0, u, v): 0 for u, v, _ in fig8.edges}
    always = MooreStrategy(P2, 0, stay, {(0, fig8.index("s2")): fig8.index("s3")})
    assert not machine_wins(fig8, always, ObjectiveSpec("AEL", 1))


def test_classical_brute_force():
    assert subset_sum_brute(SubsetSumInstance((1, 2, 3), 4))
    assert not subset_sum_brute(SubsetSumInstance((2, 4), 5))
    c = CountdownGame(1, ((0, 3, 0),), 0, 6)
    assert countdown_solve(c)
    assert not countdown_solve(CountdownGame(1, ((0, 3, 0),), 0, 5))
    with pytest.raises(OracleBudgetError):
        subset_sum_brute(SubsetSumInstance(tuple(range(1, 22)), 5))
