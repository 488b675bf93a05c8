"""Average energy under a lower energy bound only (no upper bound).

One player: an optimal play never needs energy above
U = max(ceil(t), 0) + N^2 + N^3 with N = W*(|S|+2), so the bounded solver at
that U decides the problem.  Small caps are tried first; a win at a small
cap is a win, and a loss is final as soon as the reachable plays never touch
the cap.

Two players: no complete method is known.  Sound pre-checks can prove a
loss; after that the bounded game is solved for growing caps and any win is
a genuine win.  Otherwise the answer is UNKNOWN.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .ae import ae_decide, ae_solve_one_player
from .bounded import aelu_decide, aelu_decide_one_player, reachable_expansion
from .game import P2, GameGraph, max_abs_weight
from .mp import bellman_ford, minimal_credit
from .outcome import LOSE, UNKNOWN, WIN, SolveOutcome


@dataclass(frozen=True)
class AelConfig:
    t: Fraction
    u_max: int | None = None
    schedule: str = "doubling"       # or "linear"
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if self.u_max is not None and self.u_max < 1:
            raise ValueError("u_max must be at least 1")
        if self.schedule not in ("doubling", "linear"):
            raise ValueError(f"unknown schedule {self.schedule!r}")


def ael_bound(g: GameGraph, t) -> int:
    n = max_abs_weight(g) * (g.n + 2)
    return max(math.ceil(Fraction(t)), 0) + n * n + n ** 3


def schedule_caps(u_max: int, kind: str = "doubling") -> list[int]:
    """Caps to try: 1, 2, 4, ... below u_max and then u_max itself (or 1..u_max)."""
    if kind == "linear":
        return list(range(1, u_max + 1))
    caps = []
    u = 1
    while u < u_max:
        caps.append(u)
        u *= 2
    caps.append(u_max)
    return caps


def ael_decide_one_player(g: GameGraph, t) -> SolveOutcome:
    t = Fraction(t)
    owner = g.sole_owner()
    if owner is None:
        raise ValueError("ael_decide_one_player needs a one-player game")
    if owner == P2:
        # P2 picks a single play: it wins by going negative or by exceeding t
        dist, negative = bellman_ford(g, g.init)
        if negative or min(d for d in dist if d is not None) < 0:
            return SolveOutcome(LOSE, None, None, {"path": "one-player", "reason": "energy can go negative"})
        worst = ae_solve_one_player(g)
        return SolveOutcome(WIN if worst.value <= t else LOSE, worst.value, worst.witness,
                            {"path": "one-player", "reason": "maximal average energy"})
    bound = ael_bound(g, t)
    tried = []
    for cap in schedule_caps(max(bound, 1)):
        cap = min(cap, bound)
        res = aelu_decide_one_player(g, cap, t)
        tried.append(cap)
        if res.status == WIN:
            res.diagnostics.update(path="one-player", cap=cap, bound=bound)
            return res
        if not _hits_ceiling(g, cap):
            res.diagnostics.update(path="one-player", cap=cap, bound=bound,
                                   reason="reachable plays never reach the cap")
            return res
    res.diagnostics.update(path="one-player", cap=tried[-1], bound=bound)
    return res


def _hits_ceiling(g: GameGraph, cap: int) -> bool:
    """Whether some reachable safe play can push the energy above `cap`."""
    rx = reachable_expansion(g, cap, prune=False)
    return any(c + g.w(s, v) > cap for s, c in rx.nodes for v in g.succ(s))


def energy_ceiling(g: GameGraph) -> int | None:
    """Largest energy any play from init can reach, or None if unbounded
    (a positive cycle is reachable)."""
    dist, positive = bellman_ford(g, g.init, weight=lambda u, v: -g.w(u, v))
    if positive:
        return None
    return max(0, max(-d for d in dist if d is not None))


def _solve_cap(args):
    g, cap, t = args
    return cap, aelu_decide(g, cap, t, witness=False)


def ael_incremental_two_player(g: GameGraph, cfg: AelConfig) -> SolveOutcome:
    start = time.perf_counter()
    t = cfg.t
    # pre-checks, cheapest first; each one is sound on its own
    credit = minimal_credit(g)[g.init]
    if credit != 0:
        return SolveOutcome(LOSE, None, None,
                            {"path": "incremental", "reason": "pre-check: energy needs positive initial credit"})
    ceiling = energy_ceiling(g)
    if ceiling is not None:
        # every play stays at or below the ceiling, so the bounded game is exact
        res = aelu_decide(g, ceiling, t, witness=False)
        res.diagnostics.update(path="incremental", reason="pre-check: energy bounded by structure",
                               cap=ceiling)
        return res
    if ae_decide(g, t, witness=False).status == LOSE:
        return SolveOutcome(LOSE, None, None, {"path": "incremental", "reason": "pre-check: AE alone is lost"})

    u_max = cfg.u_max if cfg.u_max is not None else ael_bound(g, t)
    caps = schedule_caps(u_max, cfg.schedule)
    last_fail = 0
    found = None
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for i in range(0, len(caps), cfg.jobs):
                batch = caps[i:i + cfg.jobs]
                results = sorted(pool.map(_solve_cap, [(g, u, t) for u in batch]), key=lambda r: r[0])
                for cap, res in results:
                    if res.status == WIN:
                        found = (cap, res)
                        break
                    last_fail = cap
                if found:
                    break
    else:
        for cap in caps:
            res = aelu_decide(g, cap, t, witness=False)
            if res.status == WIN:
                found = (cap, res)
                break
            last_fail = cap
    elapsed = time.perf_counter() - start
    if found is None:
        return SolveOutcome(UNKNOWN, None, None, {
            "path": "incremental", "largest_cap": last_fail, "elapsed": elapsed,
            "guarantee": f"no P1 strategy wins while keeping the energy at most {last_fail}"})
    # smallest winning cap between the last failure and the first success
    lo, (hi, best) = last_fail, found
    while hi - lo > 1:
        mid = (lo + hi) // 2
        res = aelu_decide(g, mid, t, witness=False)
        if res.status == WIN:
            hi, best = mid, res
        else:
            lo = mid
    best.diagnostics.update(path="incremental", cap=hi, elapsed=time.perf_counter() - start)
    return best


def ael_decide(g: GameGraph, cfg: AelConfig) -> SolveOutcome:
    """One-player games take the complete path, others the incremental one."""
    if g.sole_owner() is not None:
        return ael_decide_one_player(g, cfg.t)
    return ael_incremental_two_player(g, cfg)

