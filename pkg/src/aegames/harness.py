"""Seeded solver-versus-oracle comparisons serialized as JSON lines.

Each record is {instance, solver, oracle, agree, values}; `instance` is the
game in file format so any disagreement can be replayed directly.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Iterable

from .ae import ae_decide, ae_solve_one_player, ae_solve_two_player, ae_value_two_player
from .game import P1, GameGraph, random_game, render_game
from .mp import mp_decide
from .oracles import exhaustive_lasso_opt, minimax_memoryless
from .outcome import WIN
from .reductions import mp_to_ae
from .values import fmt

MP_THRESHOLDS = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1))


def record(instance: GameGraph | str, solver: str, oracle: str, solver_value, oracle_value) -> dict:
    text = instance if isinstance(instance, str) else render_game(instance)
    return {"instance": text, "solver": solver, "oracle": oracle,
            "agree": solver_value == oracle_value,
            "values": [_plain(solver_value), _plain(oracle_value)]}


def _plain(x):
    if isinstance(x, (Fraction, float)):
        return fmt(x)
    return x


def mp_reduction_records(g: GameGraph) -> list[dict]:
    out = []
    g2, _ = mp_to_ae(g, 0)          # the construction does not depend on t
    one_player_value = ae_solve_one_player(g2).value if g2.sole_owner() == P1 else None
    for t in MP_THRESHOLDS:
        mp_wins = mp_decide(g, t, witness=False).winner == P1
        if one_player_value is not None:
            ae_wins = one_player_value <= t
        else:
            ae_wins = ae_decide(g2, t, witness=False).status == WIN
        out.append(record(g, f"ae_decide(mp_to_ae, {fmt(t)})", f"mp_decide({fmt(t)})",
                          ae_wins, mp_wins))
    return out


def one_player_ae_record(g: GameGraph) -> dict:
    return record(g, "ae_solve_one_player", "exhaustive_lasso_opt",
                  ae_solve_one_player(g).value, exhaustive_lasso_opt(g, "AE").value)


def two_player_ae_records(g: GameGraph) -> list[dict]:
    value, _ = minimax_memoryless(g, "AE")
    out = [record(g, "ae_value_two_player", "minimax_memoryless",
                  ae_value_two_player(g).value, value)]
    if isinstance(value, Fraction):
        # the decision must flip exactly at the value
        out.append(record(g, "ae_solve_two_player(value)", "WIN",
                          ae_solve_two_player(g, value).status, WIN))
    return out


def run(count: int, seed: int) -> list[dict]:
    """`count` instances of each comparison family, drawn from `seed`."""
    rng = random.Random(seed)
    records = []
    for _ in range(count):
        g = random_game(rng.randint(1, 5), 3, 0.5, (1, 2), rng.randrange(2**32))
        records += mp_reduction_records(g)
        g = random_game(rng.randint(1, 6), 3, 1.0, (1, 2), rng.randrange(2**32))
        records.append(one_player_ae_record(g))
        g = random_game(rng.randint(1, 5), 2, 0.5, (1, 2), rng.randrange(2**32))
        records += two_player_ae_records(g)
    return records


def write_jsonl(records: Iterable[dict], path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
            n += 1
    return n
