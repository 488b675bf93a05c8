"""Average-energy solvers: zero-cycle programs, one-player optimum, two-player games."""
import random
from fractions import Fraction

from aegames.ae import (ae_decide, ae_solve_one_player, ae_solve_two_player, ae_value_two_player,
                        best_zero_cycle, best_zero_cycle_dp, build_layered_lp, layered_edges)
from aegames.game import P1, P2, GameGraph, random_game
from aegames.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, Row, simplex
from aegames.oracles import exhaustive_lasso_opt, minimax_memoryless
from aegames.outcome import LOSE, WIN
from aegames.payoff import check_lasso, lasso_payoffs
from aegames.strategy import all_memoryless, simulate
from aegames.values import NEG_INF, POS_INF

from conftest import potential_game

F = Fraction


# simplex ---------------------------------------------------------------------

def test_simplex_small_programs():
    # min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
    res = simplex([-1, -1], [Row({0: 1, 1: 2}, "<=", F(4)), Row({0: 3, 1: 1}, "<=", F(6))], 2)
    assert res.status == OPTIMAL
    assert res.value == F(-14, 5)
    assert res.x == (F(8, 5), F(6, 5))
    # equality plus >=
    res = simplex([1, 1], [Row({0: 1, 1: -1}, "=", F(1)), Row({1: 1}, ">=", F(2))], 2)
    assert (res.status, res.value) == (OPTIMAL, F(5))
    assert simplex([1], [Row({0: 1}, "<=", F(-1))], 1).status == INFEASIBLE
    assert simplex([-1], [Row({0: 1}, ">=", F(1))], 1).status == UNBOUNDED


# zero cycles -----------------------------------------------------------------

def test_layered_graph_of_two_orientations(fig2a):
    s = fig2a.index("s")
    edges = layered_edges(fig2a, s, 2)
    assert {(l * w, w) for _, _, l, w in edges} == {(-2, -1), (2, 1), (1, 1), (-1, -1)}
    assert all(u == s for u, _, l, _ in edges if l == 2)
    assert all(v == s for _, v, l, _ in edges if l == 1)
    lp = build_layered_lp(fig2a, s, 2)
    assert {grp for grp, _ in lp.rows} >= {"conservation", "endpoints", "zero-weight", "nontrivial"}


def test_best_zero_cycle_orientation(fig2a):
    s = fig2a.index("s")
    for z in (best_zero_cycle(fig2a, s, 2), best_zero_cycle(fig2a, s, 2, keep_bounds=True),
              best_zero_cycle_dp(fig2a, s, 2)):
        assert z.ae == F(-1, 2)
        assert z.cycle == (s, fig2a.index("s'"))
        assert not z.flagged
    assert best_zero_cycle(fig2a, s, 1) is None
    assert best_zero_cycle(fig2a, s, 3) is None


def test_program_and_dp_agree():
    checked = 0
    for seed in range(60):
        g = potential_game(random.Random(seed).randint(2, 5), 3, seed, noise=seed % 2)
        for s in range(g.n):
            for k in range(1, g.n + 1):
                a, b = best_zero_cycle(g, s, k), best_zero_cycle_dp(g, s, k)
                assert (a is None) == (b is None), (seed, s, k)
                if a is not None:
                    assert a.ae == b.ae
                    checked += 1
    assert checked > 50


# one player ------------------------------------------------------------------

def _p1_game(n, seed):
    g = random_game(n, 3, 1.0, (1, 2), seed)
    return g


def test_one_player_matches_lasso_enumeration():
    rng = random.Random(5)
    games = [_p1_game(rng.randint(1, 5), 100 + i) for i in range(80)]
    games += [potential_game(rng.randint(2, 5), 3, 300 + i, noise=i % 2) for i in range(80)]
    for g in games:
        res = ae_solve_one_player(g)
        opt = exhaustive_lasso_opt(g, "AE")
        assert res.value == opt.value
        check_lasso(g, res.witness)
        if res.value not in (NEG_INF, POS_INF):
            assert lasso_payoffs(g, res.witness).ae_sup == res.value
        assert ae_solve_one_player(g, use_dp=True).value == res.value


def test_one_player_figures(fig1_left, fig2a):
    assert ae_solve_one_player(fig2a).value == F(-1, 2)
    assert ae_solve_one_player(fig2a.with_init(fig2a.index("s'"))).value == F(1, 2)
    assert ae_decide(fig2a, F(-1, 2)).status == WIN
    assert ae_decide(fig2a, F(-2, 3)).status == LOSE


def test_one_player_maximizer():
    g = GameGraph.build([("a", P2), ("b", P2)], [("a", "a", 0), ("a", "b", 1), ("b", "a", -1)], "a")
    res = ae_solve_one_player(g)
    assert res.value == F(1, 2)
    assert res.diagnostics["maximizer"]


# two players -----------------------------------------------------------------

def _two_player_games(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_game(rng.randint(2, 5), 2, 0.5, (1, 2), rng.randrange(10**6))
        if g.sole_owner() is None:
            out.append(g)
    return out


def test_two_player_decision_matches_positional_minimax():
    for g in _two_player_games(40, 17):
        value, _ = minimax_memoryless(g, "AE")
        for t in (F(-1), F(0), F(1, 2), F(2)):
            expect = WIN if value <= t else LOSE
            assert ae_solve_two_player(g, t).status == expect, (g, t, value)
        assert ae_value_two_player(g).value == value


def test_two_player_witness_is_winning():
    for g in _two_player_games(25, 23):
        value, _ = minimax_memoryless(g, "AE")
        if value in (NEG_INF, POS_INF):
            continue
        res = ae_solve_two_player(g, value)
        assert res.status == WIN
        # the strategy holds the value against every positional opponent
        for s2 in all_memoryless(g, P2):
            assert lasso_payoffs(g, simulate(g, res.witness, s2)).ae_sup <= value


def test_two_player_infinite_cases():
    neg = GameGraph.build([("a", P1), ("b", P2)], [("a", "b", -1), ("b", "a", 0)], "a")
    pos = GameGraph.build([("a", P1), ("b", P2)], [("a", "b", 1), ("b", "a", 0)], "a")
    assert ae_solve_two_player(neg, -100).status == WIN
    assert ae_value_two_player(neg).value == NEG_INF
    assert ae_solve_two_player(pos, 100).status == LOSE
    assert ae_value_two_player(pos).value == POS_INF


def test_p2_escape_from_window():
    # P2 chooses between the zero loop, the a-b-c round trip and oscillating at energy 1-2
    g = GameGraph.build([("a", P2), ("b", P1), ("c", P2)],
                        [("a", "a", 0), ("a", "b", 1), ("b", "c", 1), ("c", "b", -1), ("c", "a", -2)],
                        "a")
    value, _ = minimax_memoryless(g, "AE")
    assert value == F(3, 2)
    assert ae_value_two_player(g).value == value


def test_fig1_value(fig1_left):
    assert ae_decide(fig1_left, 3).status == WIN
    assert ae_decide(fig1_left, F(29, 10)).status == LOSE
