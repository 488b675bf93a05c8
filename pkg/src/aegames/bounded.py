"""Energy kept inside [0, U]: safety (EGLU) and average energy (AELU).

The expansion pairs every state with an energy level 0..U and sends every
move that would leave the interval to a single sink.  With AE weights each
edge keeps its original weight (sink edges weigh 1); with MP weights every
edge out of (s, c) weighs c and the sink loop weighs ceil(t)+1, so the
average energy of a safe play is the mean payoff of its image.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .game import P1, P2, GameGraph
from .mp import MemorylessStrategy, howard_min_mean, mp_decide, policy_cycle
from .outcome import LOSE, WIN, SolveOutcome
from .payoff import Lasso
from .strategy import MooreStrategy

AE_WEIGHTS = "AE_WEIGHTS"
MP_WEIGHTS = "MP_WEIGHTS"


@dataclass(frozen=True)
class ExpandedGame:
    base: GameGraph
    back: tuple           # node -> (state, energy), or None for the sink
    sink: int
    U: int
    flavor: str
    t: Fraction | None = None

    def node(self, s: int, c: int) -> int:
        return s * (self.U + 1) + c


def _sink_name(g: GameGraph) -> str:
    name = "sink"
    while name in g.names or any(n.startswith(name + "@") for n in g.names):
        name += "_"
    return name


def expand_lu(g: GameGraph, U: int, t=None, flavor: str = AE_WEIGHTS) -> ExpandedGame:
    """Energy expansion with (U+1)*|S|+1 states, initial node (init, 0)."""
    if U < 0:
        raise ValueError("U must be nonnegative")
    if flavor == MP_WEIGHTS and t is None:
        raise ValueError("MP weights need the threshold t")
    width = U + 1
    sink = g.n * width
    names, owners, back = [], [], []
    for s in range(g.n):
        for c in range(width):
            names.append(f"{g.names[s]}@{c}")
            owners.append(g.owners[s])
            back.append((s, c))
    names.append(_sink_name(g))
    owners.append(P1)
    back.append(None)
    edges = {}
    for s in range(g.n):
        for c in range(width):
            u = s * width + c
            for v in g.succ(s):
                d = c + g.w(s, v)
                if 0 <= d <= U:
                    dst, w = v * width + d, d - c
                else:
                    dst, w = sink, 1
                if flavor == MP_WEIGHTS:
                    w = c
                edges.setdefault((u, dst), w)
    edges[(sink, sink)] = 1 if flavor == AE_WEIGHTS else math.ceil(Fraction(t)) + 1
    base = GameGraph(tuple(names), tuple(owners),
                     tuple(sorted((u, v, w) for (u, v), w in edges.items())), g.init * width)
    return ExpandedGame(base, tuple(back), sink, U, flavor, None if t is None else Fraction(t))


def reweight(exp: ExpandedGame, t) -> ExpandedGame:
    """AE-weighted expansion -> MP-weighted expansion for threshold t."""
    t = Fraction(t)
    sink_w = math.ceil(t) + 1

    def fn(u, v, w):
        if u == exp.sink:
            return sink_w
        return exp.back[u][1]

    return ExpandedGame(exp.base.with_weights(fn), exp.back, exp.sink, exp.U, MP_WEIGHTS, t)


def extract_moore(g: GameGraph, exp: ExpandedGame, positional: MemorylessStrategy) -> MooreStrategy:
    """Finite-memory strategy on g replaying a positional strategy of the expansion.

    Memory is the current energy (so at most U+1 values); only energies
    reachable under the strategy get table entries.  For P1 the strategy must
    not reach the sink.  A P2 strategy that does reach it switches to a dummy
    memory value and plays the first successor from then on.
    """
    player = positional.player
    start = (g.init, 0)
    seen = {start}
    queue = deque([start])
    update, nxt = {}, {}
    out_used = False
    while queue:
        s, c = queue.popleft()
        u = exp.node(s, c)
        if g.owners[s] == player:
            dst = positional.choice[u]
            if dst == exp.sink:
                if player == P1:
                    raise ValueError("positional strategy visits the sink")
                # pick the original move that leaves the interval
                succs = [v for v in g.succ(s) if not 0 <= c + g.w(s, v) <= exp.U]
            else:
                succs = [exp.back[dst][0]]
            nxt[(c, s)] = succs[0]
        else:
            succs = list(g.succ(s))
        for v in succs:
            d = c + g.w(s, v)
            if 0 <= d <= exp.U:
                update[(c, s, v)] = d
                if (v, d) not in seen:
                    seen.add((v, d))
                    queue.append((v, d))
            else:
                update[(c, s, v)] = "out"
                out_used = True
    if out_used:
        for a, b, _ in g.edges:
            update[("out", a, b)] = "out"
        for s in range(g.n):
            if g.owners[s] == player:
                nxt[("out", s)] = g.succ(s)[0]
    return MooreStrategy(player, 0, update, nxt)


def aelu_decide_two_player(g: GameGraph, U: int, t, witness: bool = True) -> SolveOutcome:
    t = Fraction(t)
    exp = expand_lu(g, U, t, MP_WEIGHTS)
    dec = mp_decide(exp.base, t, witness)
    witness = extract_moore(g, exp, dec.strategy) if dec.strategy is not None else None
    return SolveOutcome(WIN if dec.winner == P1 else LOSE, None, witness,
                        {"path": "two-player", "expanded_states": exp.base.n})


@dataclass
class ReachableExpansion:
    """Sink-free part of the energy expansion reachable from (init, 0)."""
    nodes: list           # (state, energy)
    succ: list            # successor node indices
    touches_sink: bool    # some reachable move leaves [0, U]


def reachable_expansion(g: GameGraph, U: int, prune: bool = True) -> ReachableExpansion:
    """Build the safe moves reachable from (init, 0); with `prune`, drop nodes
    from which every continuation eventually leaves the interval."""
    start = (g.init, 0)
    index = {start: 0}
    nodes = [start]
    succ: list[list[int]] = []
    touches = False
    i = 0
    while i < len(nodes):
        s, c = nodes[i]
        row = []
        for v in g.succ(s):
            d = c + g.w(s, v)
            if 0 <= d <= U:
                key = (v, d)
                j = index.get(key)
                if j is None:
                    j = index[key] = len(nodes)
                    nodes.append(key)
                row.append(j)
            else:
                touches = True
        succ.append(row)
        i += 1
    if not prune:
        return ReachableExpansion(nodes, succ, touches)
    # iteratively remove dead ends
    pred: list[list[int]] = [[] for _ in nodes]
    outdeg = [len(r) for r in succ]
    for u, row in enumerate(succ):
        for v in row:
            pred[v].append(u)
    dead = [u for u in range(len(nodes)) if outdeg[u] == 0]
    alive = [True] * len(nodes)
    while dead:
        v = dead.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for u in pred[v]:
            if alive[u]:
                outdeg[u] -= 1
                if outdeg[u] == 0:
                    dead.append(u)
    if not alive[0]:
        return ReachableExpansion([], [], touches)
    keep = [u for u in range(len(nodes)) if alive[u]]
    remap = {u: i for i, u in enumerate(keep)}
    return ReachableExpansion([nodes[u] for u in keep],
                              [[remap[v] for v in succ[u] if alive[v]] for u in keep], touches)


def _one_player_lasso(rx: ReachableExpansion, pol) -> Lasso:
    stem, cyc = policy_cycle(rx.succ, pol, 0)
    return Lasso(tuple(rx.nodes[i][0] for i in stem), tuple(rx.nodes[i][0] for i in cyc))


def aelu_decide_one_player(g: GameGraph, U: int, t, method: str = "mean-cycle",
                           budget: int = 10**6) -> SolveOutcome:
    """AELU on a one-player game.

    P1 alone: minimum mean cycle (weights = energy) of the safe reachable part.
    P2 alone: P1 wins iff no reachable move leaves [0, U] and the maximum
    mean cycle is at most t.  `method="dfs"` replaces the mean-cycle step by
    an explicit search over lassos of the expansion (slow, for cross-checks).
    """
    t = Fraction(t)
    owner = g.sole_owner()
    if owner is None:
        raise ValueError("aelu_decide_one_player needs a one-player game")
    if owner == P2:
        rx = reachable_expansion(g, U, prune=False)
        if rx.touches_sink:
            return SolveOutcome(LOSE, None, None, {"path": "one-player", "reason": "bound violable"})
        wt = [[-rx.nodes[i][1]] * len(rx.succ[i]) for i in range(len(rx.nodes))]
        eta, pol = howard_min_mean(rx.succ, wt)
        value = -eta[0]
        return SolveOutcome(WIN if value <= t else LOSE, value, _one_player_lasso(rx, pol),
                            {"path": "one-player", "expanded_states": len(rx.nodes)})
    rx = reachable_expansion(g, U)
    if not rx.nodes:
        return SolveOutcome(LOSE, None, None, {"path": "one-player", "reason": "no safe play"})
    if method == "dfs":
        return _dfs_decide(rx, t, budget)
    wt = [[rx.nodes[i][1]] * len(rx.succ[i]) for i in range(len(rx.nodes))]
    eta, pol = howard_min_mean(rx.succ, wt)
    value = eta[0]
    return SolveOutcome(WIN if value <= t else LOSE, value, _one_player_lasso(rx, pol),
                        {"path": "one-player", "expanded_states": len(rx.nodes)})


def _dfs_decide(rx: ReachableExpansion, t: Fraction, budget: int) -> SolveOutcome:
    """Guess-and-check realized as a depth-first walk over simple paths from the
    root; every time the path closes on itself the cycle's mean energy is
    compared with the best found."""
    best = None
    steps = 0
    path = [0]
    on_path = {0: 0}
    stack = [iter(rx.succ[0])]
    while stack:
        steps += 1
        if steps > budget:
            raise RuntimeError("lasso search budget exceeded")
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            del on_path[path.pop()]
            continue
        if nxt in on_path:
            cyc = path[on_path[nxt]:]
            val = Fraction(sum(rx.nodes[i][1] for i in cyc), len(cyc))
            if best is None or val < best[0]:
                best = (val, path[:on_path[nxt]], cyc)
            continue
        on_path[nxt] = len(path)
        path.append(nxt)
        stack.append(iter(rx.succ[nxt]))
    val, stem, cyc = best
    lasso = Lasso(tuple(rx.nodes[i][0] for i in stem), tuple(rx.nodes[i][0] for i in cyc))
    return SolveOutcome(WIN if val <= t else LOSE, val, lasso, {"path": "one-player-dfs"})


def aelu_decide(g: GameGraph, U: int, t, witness: bool = True) -> SolveOutcome:
    """AELU decision; witness=False may omit P2's counter-strategy on a loss."""
    if g.sole_owner() is not None:
        return aelu_decide_one_player(g, U, t)
    return aelu_decide_two_player(g, U, t, witness)


def eglu_decide(g: GameGraph, U: int) -> SolveOutcome:
    """Safety game: can P1 keep the energy inside [0, U] forever?"""
    exp = expand_lu(g, U)
    base = exp.base
    n = base.n
    pred: list[list[int]] = [[] for _ in range(n)]
    remaining = [len(base.succ(u)) for u in range(n)]
    for u, v, _ in base.edges:
        pred[v].append(u)
    attr = [False] * n
    attr[exp.sink] = True
    queue = deque([exp.sink])
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if attr[u]:
                continue
            if base.owners[u] == P2:
                attr[u] = True
                queue.append(u)
            else:
                remaining[u] -= 1
                if remaining[u] == 0:
                    attr[u] = True
                    queue.append(u)
    root = base.init
    if not attr[root]:
        choice = {u: next((v for v in base.succ(u) if not attr[v]), base.succ(u)[0])
                  for u in range(n) if base.owners[u] == P1 and u != exp.sink}
        witness = extract_moore(g, exp, MemorylessStrategy(P1, choice))
        return SolveOutcome(WIN, None, witness, {"expanded_states": n})
    # P2 attractor strategy: move to a successor closer to the sink
    rank = _attractor_rank(base, exp.sink, attr)
    choice = {}
    for u in range(n):
        if base.owners[u] == P2:
            choice[u] = min(base.succ(u), key=lambda v: (rank.get(v, math.inf), v))
    witness = extract_moore(g, exp, MemorylessStrategy(P2, choice))
    return SolveOutcome(LOSE, None, witness, {"expanded_states": n})


def _attractor_rank(base: GameGraph, sink: int, attr: list) -> dict:
    """Round in which each attractor state joined (sink has rank 0)."""
    rank = {sink: 0}
    r = 0
    while True:
        r += 1
        fresh = []
        for u in range(base.n):
            if not attr[u] or u in rank:
                continue
            succ = base.succ(u)
            if base.owners[u] == P2:
                ok = any(v in rank for v in succ)
            else:
                ok = all(v in rank for v in succ)
            if ok:
                fresh.append(u)
        if not fresh:
            return rank
        for u in fresh:
            rank[u] = r
