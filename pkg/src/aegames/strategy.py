"""Finite-memory strategies and the games they induce.

A Moore strategy observes every move of the play: after the edge s -> t its
memory goes from m to update[m, s, t], and at an owned state s it plays
next[m, s].  Reading edges (not just states) lets the memory track the
energy level exactly, so U+1 memory states suffice for energies in 0..U.
Tables only need entries for the (memory, state) pairs that can occur.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from .game import GameGraph
from .mp import MemorylessStrategy
from .payoff import Lasso


@dataclass(frozen=True)
class MooreStrategy:
    player: int
    m0: Hashable
    update: dict     # (m, s, t) -> m'
    next: dict       # (m, s) -> t

    def memory(self) -> set:
        mem = {self.m0}
        mem.update(m for m, _, _ in self.update)
        mem.update(self.update.values())
        mem.update(m for m, _ in self.next)
        return mem

    @property
    def size(self) -> int:
        return len(self.memory())

    def render(self, g: GameGraph) -> list[str]:
        lines = [f"memory-size {self.size}", f"m0 {self.m0}"]
        for (m, s), t in sorted(self.next.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
            lines.append(f"next {m} {g.names[s]} -> {g.names[t]}")
        for (m, s, t), m2 in sorted(self.update.items(), key=lambda kv: (str(kv[0][0]), kv[0][1], kv[0][2])):
            lines.append(f"update {m} {g.names[s]} {g.names[t]} -> {m2}")
        return lines

    @classmethod
    def from_memoryless(cls, g: GameGraph, strat: MemorylessStrategy) -> "MooreStrategy":
        update = {(0, u, v): 0 for u, v, _ in g.edges}
        nxt = {(0, s): t for s, t in strat.choice.items()}
        return cls(strat.player, 0, update, nxt)


def as_moore(g: GameGraph, strat) -> MooreStrategy:
    if isinstance(strat, MooreStrategy):
        return strat
    return MooreStrategy.from_memoryless(g, strat)


@dataclass(frozen=True)
class Product:
    game: GameGraph
    pairs: list          # product index -> (state, memory)


def product_game(g: GameGraph, strat: MooreStrategy) -> Product:
    """Game obtained by fixing `strat`'s moves; the other player stays free.

    Only pairs reachable from (init, m0) are built.  Owned states keep their
    owner but have a single successor, so the result is a one-player game
    for the opponent (or a zero-player one).
    """
    start = (g.init, strat.m0)
    index = {start: 0}
    pairs = [start]
    edges = []
    i = 0
    while i < len(pairs):
        s, m = pairs[i]
        if g.owners[s] == strat.player:
            targets = [strat.next[(m, s)]]
        else:
            targets = list(g.succ(s))
        for t in targets:
            key = (t, strat.update[(m, s, t)])
            if key not in index:
                index[key] = len(pairs)
                pairs.append(key)
            edges.append((i, index[key], g.w(s, t)))
        i += 1
    mem_ids = {}
    for _, m in pairs:
        mem_ids.setdefault(m, len(mem_ids))
    names = tuple(f"{g.names[s]}@m{mem_ids[m]}" for s, m in pairs)
    # fixed states have one successor, so handing them to the opponent does not
    # change the game and makes the product a genuine one-player arena
    opp = 3 - strat.player
    owners = tuple(opp for _ in pairs)
    return Product(GameGraph(names, owners, tuple(sorted(edges)), 0), pairs)


def simulate(g: GameGraph, s1, s2, max_steps: int = 100000) -> Lasso:
    """The unique play of a strategy profile, as a lasso over g's states."""
    a, b = as_moore(g, s1), as_moore(g, s2)
    if a.player == b.player:
        raise ValueError("profile needs one strategy per player")
    s, ma, mb = g.init, a.m0, b.m0
    seen = {}
    states = []
    for _ in range(max_steps):
        key = (s, ma, mb)
        if key in seen:
            i = seen[key]
            return Lasso(tuple(states[:i]), tuple(states[i:]))
        seen[key] = len(states)
        states.append(s)
        mover = a if g.owners[s] == a.player else b
        m = ma if mover is a else mb
        t = mover.next[(m, s)]
        ma = a.update[(ma, s, t)]
        mb = b.update[(mb, s, t)]
        s = t
    raise RuntimeError("profile did not become periodic within the step budget")


def all_memoryless(g: GameGraph, player: int):
    """Every positional strategy of `player`, in lexicographic order."""
    owned = [s for s in range(g.n) if g.owners[s] == player]

    def rec(i, acc):
        if i == len(owned):
            yield MemorylessStrategy(player, dict(acc))
            return
        s = owned[i]
        for t in g.succ(s):
            acc[s] = t
            yield from rec(i + 1, acc)
        del acc[s]

    yield from rec(0, {})
