"""Game constructions used as fixtures and hardness-instance generators."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .game import P1, P2, GameGraph


@dataclass(frozen=True)
class SubsetSumInstance:
    values: tuple[int, ...]
    target: int

    def __post_init__(self):
        if not self.values or any(a < 1 for a in self.values):
            raise ValueError("subset-sum needs at least one value, all positive")
        if self.target < 1:
            raise ValueError("target must be positive")


@dataclass(frozen=True)
class CountdownGame:
    """Vertices 0..n-1, edges (v, d, v') with duration d >= 1, start (init, c0)."""
    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]
    init: int
    c0: int

    def __post_init__(self):
        if any(d < 1 for _, d, _ in self.edges):
            raise ValueError("durations must be positive")
        if not 0 <= self.init < self.num_vertices or self.c0 < 0:
            raise ValueError("bad initial configuration")


def mp_to_ae(g: GameGraph, t) -> tuple[GameGraph, Fraction]:
    """Split every edge u -> v of weight w into u -> e (2w) and e -> v (-2w).

    Every cycle of the result has weight zero and the average energy of a
    play equals the mean payoff of the original play.  The new middle states
    have a single successor, so their owner is irrelevant; they go to P1.
    """
    names = list(g.names)
    owners = list(g.owners)
    edges = []
    for u, v, w in g.edges:
        e = len(names)
        names.append(f"{g.names[u]}~{g.names[v]}")
        owners.append(P1)
        edges.append((u, e, 2 * w))
        edges.append((e, v, -2 * w))
    return GameGraph(tuple(names), tuple(owners), tuple(sorted(edges)), g.init), Fraction(t)


def subset_sum_to_ael(inst: SubsetSumInstance) -> tuple[GameGraph, Fraction]:
    """Chain of choice diamonds: take a_i (weight a_i) or skip it (weight 0);
    both branches of the last diamond pay -v into `end`, which loops at 0.

    A play's average energy is its energy on reaching `end`, i.e. sum(B) - v.
    The lower bound forces sum(B) >= v and the threshold 0 forces sum(B) <= v.
    (Threshold v would accept every subset with v <= sum(B) <= 2v.)
    """
    n = len(inst.values)
    states = []
    for i in range(1, n + 1):
        states += [(f"s{i}", P1), (f"a{i}", P1), (f"na{i}", P1)]
    states.append(("end", P1))
    edges = []
    for i, a in enumerate(inst.values, start=1):
        edges += [(f"s{i}", f"a{i}", a), (f"s{i}", f"na{i}", 0)]
        nxt = f"s{i + 1}" if i < n else "end"
        w = 0 if i < n else -inst.target
        edges += [(f"a{i}", nxt, w), (f"na{i}", nxt, w)]
    edges.append(("end", "end", 0))
    return GameGraph.build(states, edges, "s1"), Fraction(0)


def countdown_to_ael(c: CountdownGame) -> tuple[GameGraph, Fraction]:
    """P1 picks a duration (paying -d), P2 resolves the target vertex; any
    vertex may quit to `stop`.  The start edge provides the initial c0."""
    states = [("start", P1)] + [(f"v{i}", P1) for i in range(c.num_vertices)] + [("stop", P1)]
    choice_nodes = sorted({(v, d) for v, d, _ in c.edges})
    states += [(f"v{v}:{d}", P2) for v, d in choice_nodes]
    edges = [("start", f"v{c.init}", c.c0), ("stop", "stop", 0)]
    edges += [(f"v{i}", "stop", 0) for i in range(c.num_vertices)]
    edges += [(f"v{v}", f"v{v}:{d}", -d) for v, d in choice_nodes]
    edges += [(f"v{v}:{d}", f"v{v2}", 0) for v, d, v2 in sorted(set(c.edges))]
    return GameGraph.build(states, edges, "start"), Fraction(0)


FIG5A, FIG5B, FIG8 = "FIG5A", "FIG5B", "FIG8"


def memory_family(kind: str, U: int | None = None) -> GameGraph:
    """Arenas showing that winning needs memory.

    FIG5A(U): P1 must go around s -> s' exactly U times, then take the -U loop.
    FIG5B(U): P2 pumps the energy through a -> c and punishes g -> d with a -> b.
    FIG8: P2 needs memory against average energy 1 under a lower bound.
    """
    if kind in (FIG5A, FIG5B) and (U is None or U < 1):
        raise ValueError(f"{kind} needs U >= 1")
    if kind == FIG5A:
        return GameGraph.build([("s", P1), ("s'", P1)],
                               [("s", "s", -U), ("s", "s'", 1), ("s'", "s", 0)], "s")
    if kind == FIG5B:
        states = [("s", P1), ("a", P2), ("b", P1), ("c", P1),
                  ("d", P1), ("e", P1), ("f", P1), ("g", P1)]
        edges = [("s", "a", 1), ("a", "b", -1), ("a", "c", 1), ("b", "g", 0), ("c", "g", 0),
                 ("g", "d", -U), ("g", "e", 0), ("g", "f", 1),
                 ("d", "a", 0), ("e", "a", 0), ("f", "a", 0)]
        return GameGraph.build(states, edges, "s")
    if kind == FIG8:
        return GameGraph.build([("s1", P1), ("s2", P2), ("s3", P1)],
                               [("s1", "s2", 1), ("s2", "s2", 0), ("s2", "s3", -1),
                                ("s3", "s3", -1), ("s3", "s2", 2)], "s1")
    raise ValueError(f"unknown family {kind!r}")
