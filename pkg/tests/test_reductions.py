"""Constructions: mean payoff to average energy, hardness gadgets, memory families."""
import random
from fractions import Fraction

import pytest

from aegames.ae import ae_decide
from aegames.ael import AelConfig, ael_decide
from aegames.game import P1, P2, GameGraph, parse_game, random_game, render_game, validate
from aegames.mp import mp_value
from aegames.oracles import countdown_solve, subset_sum_brute
from aegames.outcome import LOSE, WIN
from aegames.payoff import Lasso, lasso_payoffs
from aegames.reductions import (FIG5A, FIG5B, FIG8, CountdownGame, SubsetSumInstance,
                                countdown_to_ael, memory_family, mp_to_ae, subset_sum_to_ael)

F = Fraction


def test_mp_to_ae_size_and_loop():
    g = GameGraph.build([("x", P1)], [("x", "x", 3)], "x")
    h, t = mp_to_ae(g, 2)
    assert (h.n, t) == (2, F(2))
    x, e = h.index("x"), h.index("x~x")
    assert h.w(x, e) == 6 and h.w(e, x) == -6
    # energies 6, 0: average 3 = the mean payoff
    assert lasso_payoffs(h, Lasso((), (x, e))).ae_sup == 3
    assert ae_decide(h, 2).status == LOSE
    assert ae_decide(h, 3).status == WIN


def test_mp_to_ae_preserves_values():
    rng = random.Random(3)
    for i in range(40):
        g = random_game(rng.randint(1, 4), 3, 0.5, (1, 2), 1200 + i)
        h, _ = mp_to_ae(g, 0)
        assert h.n == g.n + len(g.edges)
        assert not validate(h)
        v = mp_value(g).values[g.init]
        for t in (v, v - F(1, 5)):
            assert (ae_decide(h, t, witness=False).status == WIN) == (v <= t)


@pytest.mark.parametrize("values,target,expect", [
    ((1, 2, 3), 4, True), ((2,), 1, False), ((5,), 5, True), ((1, 3), 5, False), ((3, 3, 3), 6, True),
])
def test_subset_sum_examples(values, target, expect):
    inst = SubsetSumInstance(values, target)
    g, t = subset_sum_to_ael(inst)
    assert g.n == 3 * len(values) + 1
    assert subset_sum_brute(inst) == expect
    assert (ael_decide(g, AelConfig(t)).status == WIN) == expect


def test_subset_sum_threshold_must_be_zero():
    # with threshold = target the single value 2 would "hit" target 1
    g, _ = subset_sum_to_ael(SubsetSumInstance((2,), 1))
    assert ael_decide(g, AelConfig(1)).status == WIN
    assert ael_decide(g, AelConfig(0)).status == LOSE


def test_subset_sum_validation():
    with pytest.raises(ValueError):
        SubsetSumInstance((), 1)
    with pytest.raises(ValueError):
        SubsetSumInstance((1, 0), 1)
    with pytest.raises(ValueError):
        SubsetSumInstance((1,), 0)


def test_countdown_examples():
    # from vertex 0 a duration-2 move leads to 0 or 1; vertex 1 only has duration 1 back to 0.
    # Counter 2 wins outright; from 4 the opponent sends the play to (1, 2), which is stuck at 1.
    base = dict(num_vertices=2, edges=((0, 2, 0), (0, 2, 1), (1, 1, 0)), init=0)
    for c0, expect in ((0, True), (1, False), (2, True), (3, False), (4, False)):
        c = CountdownGame(c0=c0, **base)
        assert countdown_solve(c) == expect, c0
        g, t = countdown_to_ael(c)
        assert ael_decide(g, AelConfig(t)).status == (WIN if expect else LOSE), c0
    # with a duration-1 self-loop at 0 every counter can be spent
    c = CountdownGame(2, ((0, 2, 0), (0, 2, 1), (1, 1, 0), (0, 1, 0)), 0, 4)
    assert countdown_solve(c)
    g, t = countdown_to_ael(c)
    assert ael_decide(g, AelConfig(t)).status == WIN


def test_countdown_shape():
    c = CountdownGame(2, ((0, 2, 0), (0, 2, 1), (1, 1, 0)), 0, 3)
    g, _ = countdown_to_ael(c)
    assert {g.names[s] for s in range(g.n) if g.owners[s] == P2} == {"v0:2", "v1:1"}
    assert g.w(g.index("start"), g.index("v0")) == 3
    with pytest.raises(ValueError):
        CountdownGame(2, ((0, 0, 1),), 0, 1)
    with pytest.raises(ValueError):
        CountdownGame(2, (), 2, 1)


def test_memory_families():
    a = memory_family(FIG5A, 3)
    assert a.n == 2 and a.w(a.index("s"), a.index("s")) == -3
    b = memory_family(FIG5B, 2)
    assert b.n == 8 and b.w(b.index("g"), b.index("d")) == -2
    assert {b.names[s] for s in range(b.n) if b.owners[s] == P2} == {"a"}
    f = memory_family(FIG8)
    assert f.n == 3 and f.owners[f.index("s2")] == P2
    for kind in (FIG5A, FIG5B):
        with pytest.raises(ValueError):
            memory_family(kind, 0)
    with pytest.raises(ValueError):
        memory_family("FIG9")


def test_everything_renders_and_parses():
    games = [memory_family(FIG5A, 2), memory_family(FIG5B, 3), memory_family(FIG8),
             subset_sum_to_ael(SubsetSumInstance((1, 2), 3))[0],
             countdown_to_ael(CountdownGame(2, ((0, 1, 1), (1, 2, 0)), 0, 3))[0],
             mp_to_ae(memory_family(FIG8), 0)[0]]
    for g in games:
        assert not validate(g)
        assert parse_game(render_game(g)) == g
