"""Mean-payoff and energy games.

Everything here reduces to one routine, `energy_solve`: the least progress
measure of an energy game, computed by a worklist lifting procedure.  The
mean-payoff threshold problem MP <= p/q is the energy game with weights
p - q*w, and values come from a search over the finitely many possible
cycle means.  One-player graphs also get Karp's algorithm and Howard's
policy iteration, the latter for large expanded graphs.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .game import P1, P2, GameGraph, max_abs_weight
from .values import farey_candidates, next_above

UNWINNABLE = None  # marker used by minimal_credit


@dataclass(frozen=True)
class MemorylessStrategy:
    """Positional strategy: chosen successor for each owned state."""
    player: int
    choice: dict

    def render(self, g: GameGraph) -> list[str]:
        return [f"{g.names[s]} -> {g.names[t]}" for s, t in sorted(self.choice.items())]


@dataclass(frozen=True)
class MPSolution:
    values: dict          # state -> Fraction
    p1: MemorylessStrategy
    p2: MemorylessStrategy


@dataclass(frozen=True)
class EnergyResult:
    credit: list          # minimal credit per state, None for the top element
    strategy: dict        # keeper's choice at keeper states (finite ones only matter)


def energy_solve(g: GameGraph, weight: Callable[[int, int], int], keeper: int,
                 cap: int | None = None) -> EnergyResult:
    """Least progress measure for the player `keeper` who wants to keep energy
    bounded from below with weights `weight(u, v)`.

    A state's credit is the least initial energy that lets the keeper keep
    the running energy nonnegative forever, or None when no finite credit
    suffices.  Values above `cap` (default |S|*W) are treated as infinite;
    minimal finite credits never exceed (|S|-1)*W.
    """
    n = g.n
    succ = [g.succ(s) for s in range(n)]
    wt = [[weight(s, t) for t in succ[s]] for s in range(n)]
    if cap is None:
        cap = n * max((abs(x) for row in wt for x in row), default=0)
    top = cap + 1
    pred: list[list[int]] = [[] for _ in range(n)]
    for s in range(n):
        for t in succ[s]:
            pred[t].append(s)
    f = [0] * n
    keep = [g.owners[s] == keeper for s in range(n)]

    def lift(s: int) -> int:
        best = None
        for t, w in zip(succ[s], wt[s]):
            ft = f[t]
            if ft == top:
                val = top
            else:
                val = ft - w
                if val < 0:
                    val = 0
                elif val > cap:
                    val = top
            if best is None or (val < best if keep[s] else val > best):
                best = val
        return best

    queue = deque(range(n))
    queued = [True] * n
    while queue:
        s = queue.popleft()
        queued[s] = False
        if f[s] == top:
            continue
        new = lift(s)
        if new > f[s]:
            f[s] = new
            for p in pred[s]:
                if not queued[p] and f[p] != top:
                    queued[p] = True
                    queue.append(p)

    strategy = {}
    for s in range(n):
        if not keep[s]:
            continue
        best_t, best_v = None, None
        for t, w in zip(succ[s], wt[s]):
            ft = f[t]
            val = top if ft == top else max(0, ft - w)
            if val > cap:
                val = top
            if best_v is None or val < best_v:
                best_t, best_v = t, val
        strategy[s] = best_t
    return EnergyResult([None if x == top else x for x in f], strategy)


def _threshold(t) -> tuple[int, int]:
    t = Fraction(t)
    return t.numerator, t.denominator


def p1_mp_region(g: GameGraph, t) -> tuple[set, dict]:
    """States where P1 ensures MP <= t, with P1's positional strategy."""
    p, q = _threshold(t)
    res = energy_solve(g, lambda u, v: p - q * g.w(u, v), P1)
    return {s for s in range(g.n) if res.credit[s] is not None}, res.strategy


def p2_mp_region(g: GameGraph, t) -> tuple[set, dict]:
    """States where P2 ensures MP >= t, with P2's positional strategy."""
    p, q = _threshold(t)
    res = energy_solve(g, lambda u, v: q * g.w(u, v) - p, P2)
    return {s for s in range(g.n) if res.credit[s] is not None}, res.strategy


@dataclass(frozen=True)
class MPDecision:
    winner: int
    strategy: MemorylessStrategy


def mp_decide(g: GameGraph, t, witness: bool = True) -> MPDecision:
    """Who wins MPsup <= t from init (P1 minimizes).  Witness for the winner.

    P2's witness needs a second energy game whose weights are scaled by |S|,
    which can dominate the running time; witness=False skips it (P1's
    strategy comes for free and is always returned).
    """
    t = Fraction(t)
    win1, strat1 = p1_mp_region(g, t)
    if g.init in win1:
        return MPDecision(P1, MemorylessStrategy(P1, strat1))
    if not witness:
        return MPDecision(P2, None)
    # values are cycle means with denominator <= |S|; P1 losing means the
    # value is at least the next such fraction above t
    win2, strat2 = p2_mp_region(g, next_above(t, g.n))
    assert g.init in win2, "mean-payoff determinacy violated"
    return MPDecision(P2, MemorylessStrategy(P2, strat2))


def mp_value(g: GameGraph) -> MPSolution:
    """Exact mean-payoff value of every state with optimal positional strategies."""
    cands = farey_candidates(g.n, max_abs_weight(g))
    cache: dict[int, set] = {}

    def wins(i: int) -> set:
        if i not in cache:
            cache[i] = p1_mp_region(g, cands[i])[0]
        return cache[i]

    values = {}
    for s in range(g.n):
        lo, hi = 0, len(cands) - 1       # P1 always wins at the top candidate
        while lo < hi:
            mid = (lo + hi) // 2
            if s in wins(mid):
                hi = mid
            else:
                lo = mid + 1
        values[s] = cands[lo]

    p1_choice, p2_choice = {}, {}
    for v in sorted(set(values.values())):
        at_v = [s for s in range(g.n) if values[s] == v]
        _, s1 = p1_mp_region(g, v)
        _, s2 = p2_mp_region(g, v)
        for s in at_v:
            if g.owners[s] == P1:
                p1_choice[s] = s1[s]
            else:
                p2_choice[s] = s2[s]
    return MPSolution(values, MemorylessStrategy(P1, p1_choice), MemorylessStrategy(P2, p2_choice))


def minimal_credit(g: GameGraph) -> dict:
    """Least initial credit for P1 to keep the energy nonnegative, per state.

    UNWINNABLE (None) when no finite credit works.
    """
    res = energy_solve(g, g.w, P1, cap=g.n * max_abs_weight(g))
    return {s: res.credit[s] for s in range(g.n)}


# one-player tools ------------------------------------------------------------

def sccs(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components (iterative Tarjan), in reverse topological order."""
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for j in range(i, len(succ[v])):
                w = succ[v][j]
                if index[w] is None:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return out


def _karp_component(comp: list[int], succ, weight) -> Fraction | None:
    """Minimum cycle mean inside one strongly connected component."""
    members = set(comp)
    k = len(comp)
    if k == 1:
        v = comp[0]
        return Fraction(weight(v, v)) if v in succ[v] else None
    src = comp[0]
    inf = None
    d = [{v: inf for v in comp} for _ in range(k + 1)]
    d[0][src] = 0
    for i in range(1, k + 1):
        prev, cur = d[i - 1], d[i]
        for u in comp:
            du = prev[u]
            if du is None:
                continue
            for v in succ[u]:
                if v in members:
                    cand = du + weight(u, v)
                    if cur[v] is None or cand < cur[v]:
                        cur[v] = cand
    best = None
    for v in comp:
        if d[k][v] is None:
            continue
        worst = None
        for i in range(k):
            if d[i][v] is None:
                continue
            val = Fraction(d[k][v] - d[i][v], k - i)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    return best


def karp_min_mean(g: GameGraph) -> dict:
    """Optimal reachable cycle mean per state of a one-player game.

    Minimum for a P1-only game, maximum for a P2-only game.
    """
    owner = g.sole_owner()
    if owner is None:
        raise ValueError("karp_min_mean needs a one-player game")
    if owner == P2:
        return {s: -v for s, v in karp_min_mean(g.negated().swapped_owners()).items()}
    succ = [g.succ(s) for s in range(g.n)]
    comps = sccs(g.n, succ)           # reverse topological: sinks first
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    best: list[Fraction | None] = []
    for i, comp in enumerate(comps):
        val = _karp_component(comp, succ, g.w)
        for v in comp:
            for t in succ[v]:
                j = comp_of[t]
                if j != i and best[j] is not None and (val is None or best[j] < val):
                    val = best[j]
        best.append(val)
    return {s: best[comp_of[s]] for s in range(g.n)}


def howard_min_mean(succ: Sequence[Sequence[int]], wt: Sequence[Sequence[int]]):
    """Policy iteration for the minimum reachable cycle mean of every node.

    Every node needs at least one successor.  Returns (eta, policy) where
    eta[v] is the optimal mean from v and policy[v] an index into succ[v]
    whose functional graph realizes it.  Exact arithmetic throughout.
    """
    n = len(succ)
    pol = [min(range(len(succ[v])), key=lambda j: (wt[v][j], succ[v][j])) for v in range(n)]
    while True:
        eta: list = [None] * n
        x: list = [None] * n
        color = [0] * n
        for v in range(n):
            if color[v]:
                continue
            path = []
            u = v
            while color[u] == 0:
                color[u] = 1
                path.append(u)
                u = succ[u][pol[u]]
            if color[u] == 1:
                i = path.index(u)
                cyc = path[i:]
                e = Fraction(sum(wt[c][pol[c]] for c in cyc), len(cyc))
                eta[u] = e
                x[u] = Fraction(0)
                for c in reversed(cyc[1:]):
                    nxt = succ[c][pol[c]]
                    eta[c] = e
                    x[c] = wt[c][pol[c]] - e + x[nxt]
            for c in reversed(path):
                if eta[c] is None:
                    nxt = succ[c][pol[c]]
                    eta[c] = eta[nxt]
                    x[c] = wt[c][pol[c]] - eta[c] + x[nxt]
                color[c] = 2

        changed = False
        for v in range(n):
            best, best_eta = pol[v], eta[succ[v][pol[v]]]
            for j, u in enumerate(succ[v]):
                if eta[u] < best_eta:
                    best, best_eta = j, eta[u]
            if best_eta < eta[v]:
                pol[v] = best
                changed = True
        if changed:
            continue
        for v in range(n):
            best, best_x = pol[v], x[v]
            for j, u in enumerate(succ[v]):
                if eta[u] == eta[v]:
                    val = wt[v][j] - eta[v] + x[u]
                    if val < best_x:
                        best, best_x = j, val
            if best != pol[v]:
                pol[v] = best
                changed = True
        if not changed:
            return eta, pol


def policy_cycle(succ, pol, start: int) -> tuple[list[int], list[int]]:
    """Follow a policy from `start`; return (stem, cycle) as node lists."""
    seen = {}
    path = []
    u = start
    while u not in seen:
        seen[u] = len(path)
        path.append(u)
        u = succ[u][pol[u]]
    i = seen[u]
    return path[:i], path[i:]


def bellman_ford(g: GameGraph, source: int, weight: Callable[[int, int], int] | None = None):
    """Shortest path weights from `source` and whether a negative cycle is reachable.

    Returns (dist, negative) with dist[v] None for unreachable states.
    """
    weight = weight or g.w
    dist: list = [None] * g.n
    dist[source] = 0
    for _ in range(g.n - 1):
        changed = False
        for u, v, _ in g.edges:
            if dist[u] is not None:
                cand = dist[u] + weight(u, v)
                if dist[v] is None or cand < dist[v]:
                    dist[v] = cand
                    changed = True
        if not changed:
            break
    negative = any(dist[u] is not None and dist[u] + weight(u, v) < dist[v]
                   for u, v, _ in g.edges)
    return dist, negative


def reachable(g: GameGraph, source: int) -> set:
    seen = {source}
    stack = [source]
    while stack:
        u = stack.pop()
        for v in g.succ(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen
