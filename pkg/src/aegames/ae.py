"""Average-energy games.

One player: after screening for negative cycles, the optimum is a shortest
path to some state s followed by the best zero cycle at s.  The best zero
cycle of length k is a linear program over a layered copy of the graph:
an edge taken at level l (counting down from k) contributes l*w to the sum
of the cycle's energy levels, so minimizing the level-weighted sum among
zero-weight flows gives k times the cycle's average energy.  A dynamic
program over (state, level, energy offset) computes the same optimum and is
kept for cross-checking.

Two players: mean-payoff values classify the states (negative value means
P1 drives the energy to minus infinity, positive means P2 drives it to plus
infinity).  On value-zero states the energy is tracked explicitly inside a
bounded window, leaving the window is routed to one of two sinks, and the
average-energy threshold becomes a mean-payoff threshold on the result.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .game import P1, P2, GameGraph, max_abs_weight
from .lp import OPTIMAL, Row, simplex
from .mp import (MemorylessStrategy, bellman_ford, howard_min_mean, mp_decide,
                 p1_mp_region, p2_mp_region, policy_cycle, reachable)
from .outcome import LOSE, WIN, SolveOutcome
from .payoff import Lasso, cycle_ae
from .strategy import MooreStrategy
from .values import NEG_INF, POS_INF, farey_candidates, next_above, next_below


# zero cycles -------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroCycleResult:
    state: int
    k: int
    ae: Fraction
    cycle: tuple[int, ...]     # k states starting with `state`; closes back to it
    flagged: bool = False      # witness disagrees with the optimum (precondition broken)


@dataclass(frozen=True)
class LayeredLP:
    """Program for the best zero cycle of length k at s.

    Variable j is the flow on layered edge `edges[j] = (u, v, l, w)`, going
    from (u, l) to (v, l-1).  Rows are tagged by the constraint group they
    belong to: bound, conservation, endpoints, zero-weight, nontrivial.
    """
    s: int
    k: int
    edges: tuple
    objective: tuple
    rows: tuple          # (group, Row)


def layered_edges(g: GameGraph, s: int, k: int) -> list[tuple[int, int, int, int]]:
    """Edges of the layered graph that lie on some (s,k) -> (s,0) path.

    Level k holds only s, level 0 holds only s, intermediate levels exclude s
    (the cycle does not pass through s before closing).
    """
    def allowed(u, v, l):
        if l == k and u != s:
            return False
        if l < k and u == s:
            return False
        if l == 1:
            return v == s
        return v != s

    fwd = {(s, k)}
    frontier = [s]
    for l in range(k, 0, -1):
        nxt = set()
        for u in frontier:
            for v in g.succ(u):
                if allowed(u, v, l):
                    nxt.add(v)
        fwd.update((v, l - 1) for v in nxt)
        frontier = nxt
    bwd = {(s, 0)}
    for l in range(1, k + 1):
        for u in range(g.n):
            if (u, l) in fwd and any((v, l - 1) in bwd and allowed(u, v, l) for v in g.succ(u)):
                bwd.add((u, l))
    out = []
    for l in range(k, 0, -1):
        for u in range(g.n):
            if (u, l) not in bwd:
                continue
            for v in g.succ(u):
                if allowed(u, v, l) and (v, l - 1) in bwd:
                    out.append((u, v, l, g.w(u, v)))
    return out


def build_layered_lp(g: GameGraph, s: int, k: int) -> LayeredLP:
    edges = layered_edges(g, s, k)
    nv = len(edges)
    objective = tuple(Fraction(l * w) for _, _, l, w in edges)
    rows = []
    for j in range(nv):
        rows.append(("bound", Row({j: 1}, "<=", Fraction(1))))
    for l in range(1, k):
        for u in range(g.n):
            coeffs = {}
            for j, (a, b, lvl, _) in enumerate(edges):
                if b == u and lvl == l + 1:
                    coeffs[j] = coeffs.get(j, 0) + 1
                if a == u and lvl == l:
                    coeffs[j] = coeffs.get(j, 0) - 1
            if coeffs:
                rows.append(("conservation", Row(coeffs, "=", Fraction(0))))
    rows.append(("endpoints", Row({j: 1 for j, e in enumerate(edges) if e[2] == k}, "=", Fraction(1))))
    rows.append(("endpoints", Row({j: 1 for j, e in enumerate(edges) if e[2] == 1}, "=", Fraction(1))))
    rows.append(("zero-weight", Row({j: e[3] for j, e in enumerate(edges) if e[3]}, "=", Fraction(0))))
    rows.append(("nontrivial", Row({j: 1 for j in range(nv)}, ">=", Fraction(1))))
    return LayeredLP(s, k, tuple(edges), objective, tuple(rows))


def best_zero_cycle(g: GameGraph, s: int, k: int, keep_bounds: bool = False) -> ZeroCycleResult | None:
    """Optimal average energy among zero cycles of length exactly k at s.

    Needs a graph without strictly negative cycles through s.  The x <= 1
    bounds are implied by unit flow on a layered DAG and are dropped from the
    solved program unless `keep_bounds` is set.
    """
    lp = build_layered_lp(g, s, k)
    if not lp.edges:
        return None
    rows = [r for grp, r in lp.rows if keep_bounds or grp != "bound"]
    # an empty zero-weight row (all weights 0) is trivially satisfied
    rows = [r for r in rows if r.coeffs or r.rhs == 0]
    res = simplex(lp.objective, rows, len(lp.edges))
    if res.status != OPTIMAL:
        return None
    opt = res.value / k
    # follow the support from (s, k) down to (s, 0)
    out_of = {}
    for j, (u, v, l, _) in enumerate(lp.edges):
        if res.x[j] > 0:
            out_of.setdefault((u, l), v)
    cycle = [s]
    u = s
    for l in range(k, 1, -1):
        u = out_of[(u, l)]
        cycle.append(u)
    ae = cycle_ae(g, cycle)
    flagged = ae != opt or sum(g.w(a, b) for a, b in zip(cycle, cycle[1:] + [s])) != 0
    return ZeroCycleResult(s, k, opt, tuple(cycle), flagged)


def best_zero_cycle_dp(g: GameGraph, s: int, k: int) -> ZeroCycleResult | None:
    """Same optimum by dynamic programming over (state, level, energy offset)."""
    edges = layered_edges(g, s, k)
    bound = k * max_abs_weight(g)
    layer: dict = {(s, 0): (0, None)}       # (state, offset) -> (best sum, parent key)
    history = []
    for l in range(k, 0, -1):
        nxt: dict = {}
        for (u, v, lvl, w) in edges:
            if lvl != l:
                continue
            for (a, e), (val, _) in layer.items():
                if a != u:
                    continue
                e2 = e + w
                if abs(e2) > bound:
                    continue
                cand = val + l * w
                if (v, e2) not in nxt or cand < nxt[(v, e2)][0]:
                    nxt[(v, e2)] = (cand, (a, e))
        history.append(nxt)
        layer = nxt
    if (s, 0) not in layer:
        return None
    best = layer[(s, 0)][0]
    # walk parents back to recover the cycle
    seq = []
    key = (s, 0)
    for lvl in range(len(history) - 1, -1, -1):
        seq.append(key[0])
        key = history[lvl][key][1]
    cycle = [s] + list(reversed(seq))[:-1]
    return ZeroCycleResult(s, k, Fraction(best, k), tuple(cycle))


# one-player ------------------------------------------------------------------

def _path_to(pred: dict, target: int) -> list[int]:
    path = [target]
    while pred.get(path[-1]) is not None:
        path.append(pred[path[-1]])
    return path[::-1]


def _bfs_tree(g: GameGraph, source: int) -> dict:
    pred = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.succ(u):
            if v not in pred:
                pred[v] = u
                queue.append(v)
    return pred


def _mean_cycle_lasso(g: GameGraph) -> Lasso:
    """Lasso reaching a minimum-mean cycle of the part reachable from init."""
    reach = sorted(reachable(g, g.init))
    local = {s: i for i, s in enumerate(reach)}
    succ = [[local[t] for t in g.succ(s)] for s in reach]
    wt = [[g.w(s, t) for t in g.succ(s)] for s in reach]
    eta, pol = howard_min_mean(succ, wt)
    best = min(range(len(reach)), key=lambda i: (eta[i], i))
    _, cyc = policy_cycle(succ, pol, best)
    cyc = [reach[i] for i in cyc]
    path = _path_to(_bfs_tree(g, g.init), cyc[0])
    return Lasso(tuple(path[:-1]), tuple(cyc))


def ae_solve_one_player(g: GameGraph, use_dp: bool = False) -> SolveOutcome:
    """Optimal average energy of a one-player game (P1 minimizes, P2 maximizes)."""
    owner = g.sole_owner()
    if owner is None:
        raise ValueError("ae_solve_one_player needs a one-player game")
    if owner == P2:
        res = ae_solve_one_player(g.negated().swapped_owners(), use_dp)
        value = -res.value
        return SolveOutcome(None, value, res.witness, dict(res.diagnostics, maximizer=True))

    dist, negative = bellman_ford(g, g.init)
    if negative:
        return SolveOutcome(None, NEG_INF, _mean_cycle_lasso(g), {"case": "negative-cycle"})
    solve = best_zero_cycle_dp if use_dp else best_zero_cycle
    best = None
    for s in range(g.n):
        if dist[s] is None:
            continue
        for k in range(1, g.n + 1):
            z = solve(g, s, k)
            if z is None:
                continue
            val = dist[s] + z.ae
            if best is None or val < best[0]:
                best = (val, s, z)
    if best is None:
        return SolveOutcome(None, POS_INF, _mean_cycle_lasso(g), {"case": "no-zero-cycle"})
    val, s, z = best
    path = _stem(g, dist, s)
    return SolveOutcome(None, val, Lasso(tuple(path[:-1]), z.cycle),
                        {"case": "zero-cycle", "k": z.k, "flagged": z.flagged})


def _stem(g: GameGraph, dist: list, target: int) -> list[int]:
    """A shortest path init -> target: breadth-first search over tight edges.

    Walking backwards greedily can get trapped in a zero cycle of tight
    edges, while every shortest path is made of tight edges only.
    """
    parent = {g.init: None}
    queue = deque([g.init])
    while queue and target not in parent:
        u = queue.popleft()
        for v in g.succ(u):
            if v not in parent and dist[u] + g.w(u, v) == dist[v]:
                parent[v] = u
                queue.append(v)
    path = [target]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


# two-player ------------------------------------------------------------------

@dataclass(frozen=True)
class MPClasses:
    negative: set
    zero: set
    positive: set
    p1_neg: dict      # P1 choices forcing MP < 0 (valid on `negative`)
    p1_zero: dict     # P1 choices forcing MP <= 0
    p2_pos: dict      # P2 choices forcing MP > 0
    p2_zero: dict     # P2 choices forcing MP >= 0


def mp_classes(g: GameGraph) -> MPClasses:
    """Sign of the mean-payoff value of every state, with the matching strategies."""
    le0, s_le0 = p1_mp_region(g, 0)
    lt0, s_lt0 = p1_mp_region(g, next_below(Fraction(0), g.n))
    ge0, s_ge0 = p2_mp_region(g, 0)
    gt0, s_gt0 = p2_mp_region(g, next_above(Fraction(0), g.n))
    allv = set(range(g.n))
    assert lt0 <= le0 and gt0 <= ge0 and not (lt0 & ge0) and (le0 | gt0) == allv
    return MPClasses(lt0, le0 - lt0, allv - le0, s_lt0, s_le0, s_gt0, s_ge0)


WIN_SINK = "win"
LOSE_SINK = "lose"


@dataclass(frozen=True)
class EnergyWindowGame:
    """Game over (state, energy) with energies kept in [low, high].

    `nodes[i]` is (state, energy) or one of the sink markers; `exits` maps
    (node index, original successor) to the node index actually reached.
    """
    game: GameGraph
    nodes: list
    low: int
    high: int


def window_game(g: GameGraph, t: Fraction, classes: MPClasses) -> EnergyWindowGame:
    n, W = g.n, max_abs_weight(g)
    slack = (n - 1) * W
    low = min(-2 * n * W, math.floor(t) - slack)
    high = max(2 * n * W, math.ceil(t) + slack)
    nodes: list = [WIN_SINK, LOSE_SINK, (g.init, 0)]
    index = {WIN_SINK: 0, LOSE_SINK: 1, (g.init, 0): 2}
    edges = {(0, 0): math.floor(t) - 1, (1, 1): math.ceil(t) + 1}
    i = 2
    while i < len(nodes):
        s, e = nodes[i]
        for t2 in g.succ(s):
            e2 = e + g.w(s, t2)
            if t2 in classes.negative or e2 < low:
                key = WIN_SINK
            elif t2 in classes.positive or e2 > high:
                key = LOSE_SINK
            else:
                key = (t2, e2)
            if key not in index:
                index[key] = len(nodes)
                nodes.append(key)
            edges[(i, index[key])] = e
        i += 1
    names = []
    for node in nodes:
        if node == WIN_SINK:
            names.append("<win>")
        elif node == LOSE_SINK:
            names.append("<lose>")
        else:
            names.append(f"{g.names[node[0]]}@{node[1]}")
    owners = [P1, P1] + [g.owners[node[0]] for node in nodes[2:]]
    game = GameGraph(tuple(names), tuple(owners),
                     tuple(sorted((u, v, w) for (u, v), w in edges.items())), 2)
    return EnergyWindowGame(game, nodes, low, high)


def _window_target(g: GameGraph, wg: EnergyWindowGame, classes: MPClasses, s: int, e: int, t2: int):
    e2 = e + g.w(s, t2)
    if t2 in classes.negative or e2 < wg.low:
        return WIN_SINK
    if t2 in classes.positive or e2 > wg.high:
        return LOSE_SINK
    return (t2, e2)


def _lift_window_strategy(g: GameGraph, wg: EnergyWindowGame, classes: MPClasses,
                          positional: MemorylessStrategy) -> MooreStrategy:
    """Moore strategy on g: follow the window-game choice while inside the window,
    then switch for good to the positional mean-payoff strategy ("mp" mode)."""
    player = positional.player
    if player == P1:
        escape = {**classes.p1_zero, **{s: classes.p1_neg[s] for s in classes.negative if s in classes.p1_neg}}
    else:
        escape = {**classes.p2_zero, **{s: classes.p2_pos[s] for s in classes.positive if s in classes.p2_pos}}
    update, nxt = {}, {}
    for i, node in enumerate(wg.nodes[2:], start=2):
        s, e = node
        for t2 in g.succ(s):
            target = _window_target(g, wg, classes, s, e, t2)
            update[(e, s, t2)] = target[1] if isinstance(target, tuple) else "mp"
        if g.owners[s] == player:
            chosen = wg.nodes[positional.choice[i]]
            if isinstance(chosen, tuple):
                nxt[(e, s)] = chosen[0]
            else:
                nxt[(e, s)] = min(t2 for t2 in g.succ(s)
                                  if _window_target(g, wg, classes, s, e, t2) == chosen)
    for u, v, _ in g.edges:
        update[("mp", u, v)] = "mp"
    for s in range(g.n):
        if g.owners[s] == player:
            nxt[("mp", s)] = escape.get(s, g.succ(s)[0])
    return MooreStrategy(player, 0, update, nxt)


def ae_solve_two_player(g: GameGraph, t, witness: bool = True) -> SolveOutcome:
    """Decide whether P1 can keep AEsup <= t from init.

    witness=False may leave out P2's strategy when P1 loses.
    """
    t = Fraction(t)
    classes = mp_classes(g)
    if g.init in classes.negative:
        strat = MemorylessStrategy(P1, {s: classes.p1_neg.get(s, classes.p1_zero.get(s, g.succ(s)[0]))
                                        for s in range(g.n) if g.owners[s] == P1})
        return SolveOutcome(WIN, NEG_INF, strat, {"case": "mp-negative"})
    if g.init in classes.positive:
        strat = MemorylessStrategy(P2, {s: classes.p2_pos.get(s, classes.p2_zero.get(s, g.succ(s)[0]))
                                        for s in range(g.n) if g.owners[s] == P2})
        return SolveOutcome(LOSE, POS_INF, strat, {"case": "mp-positive"})
    wg = window_game(g, t, classes)
    dec = mp_decide(wg.game, t, witness)
    strat = _lift_window_strategy(g, wg, classes, dec.strategy) if dec.strategy is not None else None
    return SolveOutcome(WIN if dec.winner == P1 else LOSE, None, strat,
                        {"case": "mp-zero", "window": (wg.low, wg.high),
                         "expanded_states": wg.game.n})


def ae_value_two_player(g: GameGraph) -> SolveOutcome:
    """Exact average-energy value from init.

    Optimal play is a lasso whose cycle has at most |S| edges, so the value is
    a fraction with denominator at most |S| and absolute value at most 2|S|W;
    the threshold decision is monotone, so a binary search over those
    candidates lands on it exactly.
    """
    classes = mp_classes(g)
    if g.init in classes.negative:
        return SolveOutcome(None, NEG_INF, None, {"case": "mp-negative"})
    if g.init in classes.positive:
        return SolveOutcome(None, POS_INF, None, {"case": "mp-positive"})
    W = max_abs_weight(g)
    cands = farey_candidates(g.n, 2 * g.n * W)
    lo, hi = 0, len(cands) - 1
    decisions = 0
    while lo < hi:
        mid = (lo + hi) // 2
        decisions += 1
        if ae_solve_two_player(g, cands[mid], witness=False).status == WIN:
            hi = mid
        else:
            lo = mid + 1
    return SolveOutcome(None, cands[lo], None, {"case": "mp-zero", "decisions": decisions})


def ae_decide(g: GameGraph, t, witness: bool = True) -> SolveOutcome:
    """Average-energy threshold decision, using the one-player algorithm when it applies."""
    t = Fraction(t)
    owner = g.sole_owner()
    if owner == P1:
        res = ae_solve_one_player(g)
        return SolveOutcome(WIN if res.value <= t else LOSE, res.value, res.witness,
                            dict(res.diagnostics, path="one-player"))
    res = ae_solve_two_player(g, t, witness)
    res.diagnostics["path"] = "two-player"
    return res

