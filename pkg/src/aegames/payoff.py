"""Exact payoffs of finite prefixes and of ultimately periodic plays.

Energy level EL is the running sum of weights.  On a prefix of length n the
average energy is the mean of EL over positions 1..n (the starting energy at
position 0 is not counted).  For a lasso `stem . C^w` only the sign of the
cycle weight and one period matter, so everything is closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .game import GameGraph, ObjectiveSpec
from .values import NEG_INF, POS_INF, ExtRational


class LassoError(ValueError):
    pass


@dataclass(frozen=True)
class Lasso:
    """The play prefix . cycle^w.  With an empty prefix, cycle[0] is the start."""
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def start(self) -> int:
        return self.prefix[0] if self.prefix else self.cycle[0]

    def states(self, n: int) -> list[int]:
        """First n+1 states of the play (positions 0..n)."""
        out = list(self.prefix[: n + 1])
        i = 0
        while len(out) <= n:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return out

    def render(self, g: GameGraph) -> str:
        pre = ",".join(g.names[s] for s in self.prefix)
        cyc = ",".join(g.names[s] for s in self.cycle)
        return f"{pre} | {cyc}" if pre else f"| {cyc}"


@dataclass(frozen=True)
class LassoPayoffs:
    mp_sup: ExtRational
    mp_inf: ExtRational
    tp_sup: ExtRational
    tp_inf: ExtRational
    ae_sup: ExtRational
    ae_inf: ExtRational


def _path_weights(g: GameGraph, seq: Sequence[int]) -> list[int]:
    out = []
    for u, v in zip(seq, seq[1:]):
        if not g.has_edge(u, v):
            raise LassoError(f"no edge {g.names[u]} -> {g.names[v]}")
        out.append(g.w(u, v))
    return out


def energy_level(g: GameGraph, prefix: Sequence[int]) -> int:
    if not prefix:
        raise LassoError("a prefix contains at least one state")
    return sum(_path_weights(g, prefix))


def prefix_payoffs(g: GameGraph, prefix: Sequence[int]) -> tuple[Fraction, Fraction, Fraction]:
    """(MP, TP, AE) of a finite prefix with at least one edge."""
    ws = _path_weights(g, prefix)
    if not ws:
        raise LassoError("payoffs need a prefix with at least one edge")
    n = len(ws)
    el = 0
    total = 0
    for w in ws:
        el += w
        total += el
    return Fraction(el, n), Fraction(el), Fraction(total, n)


def parse_lasso(g: GameGraph, text: str) -> Lasso:
    if text.count("|") != 1:
        raise LassoError("lasso syntax is '<prefix> | <cycle>'")
    left, right = text.split("|")

    def names(part):
        toks = [t.strip() for t in part.split(",") if t.strip()]
        try:
            return tuple(g.index(t) for t in toks)
        except KeyError as exc:
            raise LassoError(str(exc.args[0])) from None

    lasso = Lasso(names(left), names(right))
    check_lasso(g, lasso)
    return lasso


def check_lasso(g: GameGraph, lasso: Lasso) -> None:
    if not lasso.cycle:
        raise LassoError("cycle must be nonempty")
    if lasso.start() != g.init:
        raise LassoError(f"play must start at the initial state {g.names[g.init]}")
    _path_weights(g, lasso.prefix)
    _path_weights(g, lasso.cycle + lasso.cycle[:1])
    if lasso.prefix and not g.has_edge(lasso.prefix[-1], lasso.cycle[0]):
        raise LassoError("prefix does not connect to the cycle")


def _stem_and_cycle(g: GameGraph, lasso: Lasso) -> tuple[list[int], list[int]]:
    """Weights of the stem (up to the first visit of cycle[0]) and of one period."""
    check_lasso(g, lasso)
    stem = _path_weights(g, list(lasso.prefix) + [lasso.cycle[0]]) if lasso.prefix else []
    cyc = _path_weights(g, list(lasso.cycle) + [lasso.cycle[0]])
    return stem, cyc


def lasso_payoffs(g: GameGraph, lasso: Lasso) -> LassoPayoffs:
    stem, cyc = _stem_and_cycle(g, lasso)
    c = sum(cyc)
    mp = Fraction(c, len(cyc))
    if c < 0:
        return LassoPayoffs(mp, mp, NEG_INF, NEG_INF, NEG_INF, NEG_INF)
    if c > 0:
        return LassoPayoffs(mp, mp, POS_INF, POS_INF, POS_INF, POS_INF)
    base = sum(stem)
    levels = []
    el = 0
    for w in cyc:
        el += w
        levels.append(el)
    ae = base + Fraction(sum(levels), len(levels))
    return LassoPayoffs(mp, mp, Fraction(base + max(levels)), Fraction(base + min(levels)), ae, ae)


def cycle_ae(g: GameGraph, cycle: Sequence[int]) -> Fraction:
    """Average energy over one period of a closed walk listed without its return."""
    ws = _path_weights(g, list(cycle) + [cycle[0]])
    el = 0
    total = 0
    for w in ws:
        el += w
        total += el
    return Fraction(total, len(ws))


def period_energies(g: GameGraph, lasso: Lasso, credit: int = 0) -> tuple[list[int], int]:
    """Energies at positions 0..|prefix|+|cycle| and the cycle drift."""
    stem, cyc = _stem_and_cycle(g, lasso)
    out = [credit]
    for w in stem + cyc:
        out.append(out[-1] + w)
    return out, sum(cyc)


def check_objective(g: GameGraph, lasso: Lasso, obj: ObjectiveSpec) -> bool:
    """Membership of the lasso's play in the objective set."""
    kind = obj.kind
    pay = lasso_payoffs(g, lasso)
    if kind == "MP":
        return pay.mp_sup <= obj.threshold
    if kind == "AE":
        return pay.ae_sup <= obj.threshold
    credit = obj.credit if kind == "EGL" else 0
    levels, drift = period_energies(g, lasso, credit)
    lower_ok = drift >= 0 and min(levels) >= 0
    if kind in ("EGL", "AEL"):
        ok = lower_ok
    else:
        ok = lower_ok and drift == 0 and max(levels) <= obj.upper
    if kind in ("AEL", "AELU"):
        ok = ok and pay.ae_sup <= obj.threshold
    return ok


def trace_rows(g: GameGraph, lasso: Lasso, steps: int) -> list[tuple[int, int, int, Fraction | None]]:
    """(step, state, energy, running AE) for positions 0..steps.

    Running AE at step 0 is undefined (no edge taken) and reported as None.
    """
    states = lasso.states(steps)
    rows = [(0, states[0], 0, None)]
    el = 0
    total = 0
    for i in range(1, steps + 1):
        el += g.w(states[i - 1], states[i])
        total += el
        rows.append((i, states[i], el, Fraction(total, i)))
    return rows
