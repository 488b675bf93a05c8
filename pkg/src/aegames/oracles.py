"""Brute-force ground truth for the solvers.

Everything here enumerates: positional strategy profiles, finite-memory
machines, lassos, subsets, countdown configurations.  Budgets are explicit
and exceeding one raises `OracleBudgetError`; nothing is ever approximated.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .ael import AelConfig, ael_decide
from .ae import ae_decide
from .bounded import aelu_decide, eglu_decide
from .game import P1, P2, GameGraph, ObjectiveSpec
from .mp import bellman_ford, karp_min_mean, minimal_credit, mp_decide
from .outcome import LOSE, WIN
from .payoff import Lasso, check_objective, lasso_payoffs
from .reductions import CountdownGame, SubsetSumInstance
from .strategy import MooreStrategy, all_memoryless, product_game, simulate
from .values import POS_INF, ExtRational


class OracleBudgetError(RuntimeError):
    pass


PAYOFFS = ("MP", "TPsup", "TPinf", "AE")


def _payoff_of(g: GameGraph, lasso: Lasso, payoff: str) -> ExtRational:
    p = lasso_payoffs(g, lasso)
    return {"MP": p.mp_sup, "TPsup": p.tp_sup, "TPinf": p.tp_inf, "AE": p.ae_sup}[payoff]


def profile_count(g: GameGraph) -> int:
    total = 1
    for s in range(g.n):
        total *= len(g.succ(s))
    return total


def minimax_memoryless(g: GameGraph, payoff: str, budget: int = 10**6):
    """min over P1 positional strategies of max over P2 positional strategies.

    Returns (value, (sigma1, sigma2)) where the profile is the first optimal
    one in lexicographic enumeration order.
    """
    if payoff not in PAYOFFS:
        raise ValueError(f"unknown payoff {payoff!r}")
    if profile_count(g) > budget:
        raise OracleBudgetError(f"{profile_count(g)} profiles exceed the budget {budget}")
    p2_strats = list(all_memoryless(g, P2))
    best = None
    for s1 in all_memoryless(g, P1):
        worst = None
        for s2 in p2_strats:
            val = _payoff_of(g, simulate(g, s1, s2), payoff)
            if worst is None or val > worst[0]:
                worst = (val, s2)
        if best is None or worst[0] < best[0]:
            best = (worst[0], (s1, worst[1]))
    return best


def memoryless_winner(g: GameGraph, objective: ObjectiveSpec, budget: int = 10**6) -> str:
    """WIN iff some P1 positional strategy beats every P2 positional strategy.

    Exact for objectives where both players can play positionally (MP, AE,
    EGL); for the others it only describes positional play.
    """
    if profile_count(g) > budget:
        raise OracleBudgetError(f"{profile_count(g)} profiles exceed the budget {budget}")
    p2_strats = list(all_memoryless(g, P2))
    for s1 in all_memoryless(g, P1):
        if all(check_objective(g, simulate(g, s1, s2), objective) for s2 in p2_strats):
            return WIN
    return LOSE


# exhaustive lasso search ------------------------------------------------------

@dataclass(frozen=True)
class LassoOpt:
    value: ExtRational
    witness: Lasso | None


def simple_lassos(succ: Callable[[int], Iterable[int]], root: int, budget: int):
    """Every lasso of a graph from `root` whose states are pairwise distinct,
    as (prefix, cycle) lists of node ids, in depth-first lexicographic order."""
    path = [root]
    on_path = {root: 0}
    stack = [iter(sorted(succ(root)))]
    count = 0
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            del on_path[path.pop()]
            continue
        if nxt in on_path:
            count += 1
            if count > budget:
                raise OracleBudgetError(f"more than {budget} lassos")
            i = on_path[nxt]
            yield path[:i], path[i:]
            continue
        on_path[nxt] = len(path)
        path.append(nxt)
        stack.append(iter(sorted(succ(nxt))))


def config_graph(g: GameGraph, cap: int) -> tuple[list[tuple[int, int]], dict]:
    """Pairs (state, energy) reachable from (init, 0) without leaving [0, cap]."""
    start = (g.init, 0)
    nodes = [start]
    index = {start: 0}
    succ: dict[int, list[int]] = {}
    i = 0
    while i < len(nodes):
        s, e = nodes[i]
        out = []
        for v in g.succ(s):
            e2 = e + g.w(s, v)
            if 0 <= e2 <= cap:
                if (v, e2) not in index:
                    index[(v, e2)] = len(nodes)
                    nodes.append((v, e2))
                out.append(index[(v, e2)])
        succ[i] = out
        i += 1
    return nodes, succ


def exhaustive_lasso_opt(g: GameGraph, kind: str, bounds: dict | None = None,
                         budget: int = 10**6) -> LassoOpt:
    """Best value over the plays of a one-player game.

    kind MP or AE: every simple lasso of g is enumerated; minimised for a P1
    game and maximised for a P2 game.

    kind AELU (bounds["U"]) or AEL (bounds["cap"]): plays that keep the
    energy in [0, bound] are exactly the infinite paths of the (state, energy)
    graph, and their best average energy is its minimum reachable cycle mean
    with each edge weighted by the energy it lands on.  Simple lassos of that
    graph are far too many to list, so the optimum is computed exactly with
    Karp's algorithm and a witness cycle is read off the tight edges.
    The result is +inf when no play stays inside the bounds.  For AEL it is
    the optimum over plays whose energy never exceeds the cap.
    """
    owner = g.sole_owner()
    if owner is None:
        raise ValueError("exhaustive_lasso_opt needs a one-player game")
    bounds = bounds or {}
    if kind in ("MP", "AE"):
        sign = 1 if owner == P1 else -1
        best = None
        for prefix, cycle in simple_lassos(g.succ, g.init, budget):
            lasso = Lasso(tuple(prefix), tuple(cycle))
            val = _payoff_of(g, lasso, kind)
            if best is None or sign * val < sign * best.value:
                best = LassoOpt(val, lasso)
        return best
    if kind not in ("AELU", "AEL"):
        raise ValueError(f"unsupported kind {kind!r}")
    if owner != P1:
        raise ValueError(f"{kind} search needs a P1 game")
    cap = bounds["U"] if kind == "AELU" else bounds["cap"]
    nodes, succ = config_graph(g, cap)
    if len(nodes) * cap > budget:
        raise OracleBudgetError(f"configuration graph with {len(nodes)} nodes exceeds the budget")
    alive = _live_nodes(nodes, succ)
    if 0 not in alive:
        return LassoOpt(POS_INF, None)
    keep = sorted(alive)
    pos = {v: i for i, v in enumerate(keep)}
    edges = tuple((pos[u], pos[v], nodes[v][1]) for u in keep for v in succ[u] if v in alive)
    cg = GameGraph(tuple(f"{g.names[s]}#{e}" for s, e in (nodes[v] for v in keep)),
                   tuple(P1 for _ in keep), tuple(sorted(edges)), 0)
    value = karp_min_mean(cg)[0]
    prefix, cycle = _tight_cycle(cg, value)
    lasso = Lasso(tuple(nodes[keep[i]][0] for i in prefix), tuple(nodes[keep[i]][0] for i in cycle))
    return LassoOpt(value, lasso)


def _live_nodes(nodes: list, succ: dict) -> set:
    """Nodes with an infinite path, found by peeling off dead ends."""
    alive = set(range(len(nodes)))
    pred: dict[int, list[int]] = {v: [] for v in alive}
    out = {u: len(succ[u]) for u in alive}
    for u in alive:
        for v in succ[u]:
            pred[v].append(u)
    queue = deque(u for u in alive if out[u] == 0)
    while queue:
        v = queue.popleft()
        alive.discard(v)
        for u in pred[v]:
            out[u] -= 1
            if out[u] == 0:
                queue.append(u)
    return alive


def _tight_cycle(cg: GameGraph, value: Fraction) -> tuple[list[int], list[int]]:
    """A reachable cycle of mean `value`, the minimum reachable cycle mean.

    After shifting weights to q*w - p no reachable cycle is negative; every
    edge of an optimal cycle is then tight for the shortest distances from
    the root, and any cycle made of tight edges has weight zero.
    """
    p, q = value.numerator, value.denominator
    dist, _ = bellman_ford(cg, 0, weight=lambda u, v: q * cg.w(u, v) - p)
    tight = {u: [v for v in cg.succ(u) if dist[u] is not None and dist[v] is not None
                 and dist[u] + q * cg.w(u, v) - p == dist[v]] for u in range(cg.n)}
    parent = {0: None}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in cg.succ(u):
            if v not in parent:
                parent[v] = u
                queue.append(v)
    # keep only the tight edges that can be followed forever
    live = {u for u in parent}
    changed = True
    while changed:
        changed = False
        for u in sorted(live):
            if not any(v in live for v in tight[u]):
                live.discard(u)
                changed = True
    for start in sorted(live):
        path, on = [start], {start: 0}
        u = start
        while True:
            u = next(v for v in tight[u] if v in live)
            if u in on:
                cycle = path[on[u]:]
                stem = []
                v = parent[cycle[0]]
                while v is not None:
                    stem.append(v)
                    v = parent[v]
                return stem[::-1], cycle
            on[u] = len(path)
            path.append(u)
    raise AssertionError("no tight cycle found for the optimal mean")


# finite-memory machines --------------------------------------------------------

def machine_wins(g: GameGraph, machine: MooreStrategy, objective: ObjectiveSpec) -> bool:
    """Does fixing `machine` win `objective` for its player, whatever the
    opponent does?  The product is a one-player game for the opponent and is
    decided by the matching solver."""
    prod = product_game(g, machine).game
    kind = objective.kind
    t = objective.threshold
    if kind == "MP":
        p1_wins = mp_decide(prod, t, witness=False).winner == P1
    elif kind == "AE":
        p1_wins = ae_decide(prod, t, witness=False).status == WIN
    elif kind == "EGLU":
        p1_wins = eglu_decide(prod, objective.upper).status == WIN
    elif kind == "AELU":
        p1_wins = aelu_decide(prod, objective.upper, t, witness=False).status == WIN
    elif kind == "EGL":
        credit = minimal_credit(prod)[prod.init]
        p1_wins = credit is not None and credit <= objective.credit
    else:
        p1_wins = ael_decide(prod, AelConfig(t)).status == WIN
    return p1_wins == (machine.player == P1)


@dataclass
class _Partial:
    nxt: dict
    upd: dict
    used: int


def _first_gap(g: GameGraph, player: int, part: _Partial):
    """First undefined table entry met by a breadth-first walk of the product
    from (init, 0), or None once the reachable product is complete."""
    seen = {(g.init, 0)}
    queue = deque(seen)
    while queue:
        s, m = queue.popleft()
        if g.owners[s] == player:
            if (m, s) not in part.nxt:
                return ("next", m, s)
            targets = [part.nxt[(m, s)]]
        else:
            targets = g.succ(s)
        for t in targets:
            key = (m, s, t)
            if key not in part.upd:
                return ("update",) + key
            nxt = (t, part.upd[key])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return None


def _refuted(g: GameGraph, player: int, part: _Partial, objective: ObjectiveSpec) -> bool:
    """Cheap early rejection for bounded-energy objectives, using only the
    defined part of the machine.

    A machine for P1 is dead once some reachable move leaves [0, U].
    A P2 machine is dead for EGLU once the defined part holds a reachable
    cycle of in-bounds configurations (P1 can then loop there forever).
    """
    if objective.kind not in ("EGLU", "AELU"):
        return False
    U = objective.upper
    start = (g.init, 0, 0)
    seen = {start}
    order = [start]
    edges: dict = {}
    i = 0
    while i < len(order):
        s, m, e = order[i]
        i += 1
        if g.owners[s] == player:
            if (m, s) not in part.nxt:
                continue
            targets = [part.nxt[(m, s)]]
        else:
            targets = g.succ(s)
        out = []
        for t in targets:
            if (m, s, t) not in part.upd:
                continue
            e2 = e + g.w(s, t)
            if not 0 <= e2 <= U:
                if player == P1:
                    return True
                continue
            node = (t, part.upd[(m, s, t)], e2)
            out.append(node)
            if node not in seen:
                seen.add(node)
                order.append(node)
        edges[(s, m, e)] = out
    if player == P1 or objective.kind != "EGLU":
        return False
    # cycle detection by repeatedly peeling nodes without defined successors
    indeg = {v: 0 for v in order}
    for v in order:
        for w in edges.get(v, ()):
            indeg[w] += 1
    queue = deque(v for v in order if indeg[v] == 0)
    removed = 0
    while queue:
        v = queue.popleft()
        removed += 1
        for w in edges.get(v, ()):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return removed < len(order)


def enumerate_moore_winners(g: GameGraph, objective: ObjectiveSpec, mem_bound: int,
                            player: int = P1, budget: int = 10**6):
    """Smallest memory size k <= mem_bound for which some Moore machine of
    `player` wins, with the first such machine; (None, None) if none does.

    Machines are built lazily: only table entries reachable in the product
    are ever fixed, and memory states are numbered in order of first use so
    that renamings of one machine are generated once.
    """
    checked = 0
    for k in range(1, mem_bound + 1):
        stack = [_Partial({}, {}, 1)]
        while stack:
            part = stack.pop()
            checked += 1
            if checked > budget:
                raise OracleBudgetError(f"more than {budget} partial machines")
            if _refuted(g, player, part, objective):
                continue
            gap = _first_gap(g, player, part)
            if gap is None:
                machine = MooreStrategy(player, 0, dict(part.upd), dict(part.nxt))
                if machine_wins(g, machine, objective):
                    return k, machine
                continue
            children = []
            if gap[0] == "next":
                _, m, s = gap
                for t in g.succ(s):
                    children.append(_Partial({**part.nxt, (m, s): t}, part.upd, part.used))
            else:
                key = gap[1:]
                for m2 in range(min(part.used + 1, k)):
                    children.append(_Partial(part.nxt, {**part.upd, key: m2},
                                             max(part.used, m2 + 1)))
            stack.extend(reversed(children))
    return None, None


# classical problems --------------------------------------------------------------

def subset_sum_brute(inst: SubsetSumInstance) -> bool:
    n = len(inst.values)
    if n > 20:
        raise OracleBudgetError("subset-sum brute force limited to 20 values")
    return any(sum(c) == inst.target
               for r in range(n + 1) for c in itertools.combinations(inst.values, r))


def countdown_solve(c: CountdownGame) -> bool:
    """Backward induction over configurations (v, counter)."""
    if c.c0 > 10**4:
        raise OracleBudgetError("countdown counter limited to 10^4")
    moves: dict[int, dict[int, list[int]]] = {}
    for v, d, v2 in c.edges:
        moves.setdefault(v, {}).setdefault(d, []).append(v2)
    win = [[True] * c.num_vertices]
    for counter in range(1, c.c0 + 1):
        row = []
        for v in range(c.num_vertices):
            row.append(any(d <= counter and all(win[counter - d][v2] for v2 in targets)
                           for d, targets in moves.get(v, {}).items()))
        win.append(row)
    return win[c.c0][c.init]
