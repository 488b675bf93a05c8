"""Command-line front end.

    aegames solve    --input G --objective {mp,egl,eglu,ae,aelu,ael} [...]
    aegames evaluate --input G --lasso "p1,p2 | c1,c2"
    aegames trace    --input G --lasso "..." --steps N
    aegames generate --family {mp2ae,subsetsum,countdown,fig5a,fig5b,fig8,random} [...]
    aegames harness  --count N --seed S --output results.jsonl

Reports are `key: value` lines (or one JSON object with --json).  Exit codes:
0 WIN, 1 LOSE, 2 UNKNOWN, 3 bad arguments, 4 unreadable input, 5 budget or
solver error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import harness
from .ae import ae_decide, ae_solve_one_player, ae_value_two_player
from .ael import AelConfig, ael_bound, ael_decide
from .bounded import aelu_decide, eglu_decide
from .game import P1, GameFormatError, GameGraph, ObjectiveSpec, parse_game, random_game, render_game
from .mp import MemorylessStrategy, energy_solve, mp_decide, mp_value
from .oracles import (OracleBudgetError, enumerate_moore_winners, exhaustive_lasso_opt,
                      memoryless_winner)
from .outcome import LOSE, UNKNOWN, WIN, SolveOutcome
from .payoff import Lasso, LassoError, lasso_payoffs, parse_lasso, trace_rows
from .reductions import (CountdownGame, SubsetSumInstance, countdown_to_ael, memory_family,
                         mp_to_ae, subset_sum_to_ael)
from .strategy import MooreStrategy
from .values import POS_INF, fmt, is_finite, parse_value

EXIT = {WIN: 0, LOSE: 1, UNKNOWN: 2}
EXIT_USAGE, EXIT_INPUT, EXIT_FAILURE = 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments, which would read as UNKNOWN
    def error(self, message):
        raise UsageError(message)


# report helpers -----------------------------------------------------------------

def _emit(report: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(report) + "\n")
        return
    for key, val in report.items():
        if isinstance(val, list):
            out.write(f"{key}:\n")
            for line in val:
                out.write(f"  {line}\n")
        else:
            out.write(f"{key}: {val}\n")


def _render_witness(g: GameGraph, w) -> list[str]:
    if isinstance(w, Lasso):
        return [f"play {w.render(g)}"]
    if isinstance(w, MemorylessStrategy):
        return [f"player {w.player} positional"] + w.render(g)
    if isinstance(w, MooreStrategy):
        return [f"player {w.player} moore"] + w.render(g)
    return []


def _read_game(path: str) -> GameGraph:
    with open(path, "rb") as fh:
        return parse_game(fh.read())


# solve ---------------------------------------------------------------------------

def _objective(args) -> ObjectiveSpec:
    kind = args.objective.upper()
    needs_t = kind in ("MP", "AE", "AELU", "AEL")
    needs_u = kind in ("EGLU", "AELU")
    if needs_u and args.upper_bound is None:
        raise UsageError(f"--objective {args.objective} needs --upper-bound")
    t = None
    if needs_t:
        if args.threshold is None:
            t = Fraction(0)         # placeholder; replaced by the value when --value is given
        else:
            t = parse_value(args.threshold)
            if not is_finite(t):
                raise UsageError("--threshold must be a finite rational")
    return ObjectiveSpec(kind, t, args.upper_bound if needs_u else None,
                         args.credit if kind == "EGL" else 0)


def _value(g: GameGraph, obj: ObjectiveSpec):
    if obj.kind == "MP":
        return mp_value(g).values[g.init]
    if obj.kind == "AE":
        if g.sole_owner() is not None:
            return ae_solve_one_player(g).value
        return ae_value_two_player(g).value
    if obj.kind == "AELU" and g.sole_owner() is not None:
        return aelu_decide(g, obj.upper, 0).value
    raise UsageError("--value is available for mp, ae and one-player aelu")


def _decide(g: GameGraph, obj: ObjectiveSpec, args) -> SolveOutcome:
    kind, t = obj.kind, obj.threshold
    if kind == "MP":
        dec = mp_decide(g, t, args.witness)
        return SolveOutcome(WIN if dec.winner == P1 else LOSE, None, dec.strategy)
    if kind == "EGL":
        res = energy_solve(g, g.w, P1)
        credit = res.credit[g.init]
        if credit is not None and credit <= obj.credit:
            return SolveOutcome(WIN, None, MemorylessStrategy(P1, {
                s: t2 for s, t2 in res.strategy.items() if g.owners[s] == P1}),
                {"minimal_credit": credit})
        return SolveOutcome(LOSE, None, None,
                            {"minimal_credit": "none" if credit is None else credit})
    if kind == "EGLU":
        return eglu_decide(g, obj.upper)
    if kind == "AE":
        return ae_decide(g, t, args.witness)
    if kind == "AELU":
        return aelu_decide(g, obj.upper, t, args.witness)
    return ael_decide(g, AelConfig(t, args.u_max, args.schedule, args.jobs))


def _oracle(g: GameGraph, obj: ObjectiveSpec, outcome: SolveOutcome) -> tuple[str, str]:
    """Brute-force verdict and the method used."""
    owner = g.sole_owner()
    if obj.kind in ("MP", "AE", "EGL"):
        return memoryless_winner(g, obj), "positional profiles"
    if obj.kind in ("EGLU", "AELU"):
        if owner == P1 and obj.kind == "AELU":
            best = exhaustive_lasso_opt(g, "AELU", {"U": obj.upper})
            return (WIN if best.value <= obj.threshold else LOSE), "bounded-energy plays"
        k, _ = enumerate_moore_winners(g, obj, obj.upper + 1)
        return (WIN if k is not None else LOSE), f"machines with at most {obj.upper + 1} memory states"
    # AEL
    if owner == P1:
        cap = outcome.diagnostics.get("cap") or min(ael_bound(g, obj.threshold), 64)
        best = exhaustive_lasso_opt(g, "AEL", {"cap": cap})
        verdict = WIN if best.value <= obj.threshold else (LOSE if outcome.status == LOSE else UNKNOWN)
        return verdict, f"plays with energy at most {cap}"
    k, _ = enumerate_moore_winners(g, obj, 3)
    return (WIN if k is not None else UNKNOWN), "machines with at most 3 memory states"


def cmd_solve(args, out) -> int:
    g = _read_game(args.input)
    obj = _objective(args)
    report: dict = {}
    value = None
    if args.value:
        value = _value(g, obj)
        if args.threshold is None and obj.threshold is not None:
            # decide at the value itself: the optimum is attained
            t = value if is_finite(value) else (Fraction(0))
            obj = ObjectiveSpec(obj.kind, t, obj.upper, obj.credit)
            if value == POS_INF:
                outcome = SolveOutcome(LOSE)
            else:
                outcome = _decide(g, obj, args)
        else:
            outcome = _decide(g, obj, args)
    else:
        if obj.threshold is not None and args.threshold is None:
            raise UsageError(f"--objective {args.objective} needs --threshold (or --value)")
        outcome = _decide(g, obj, args)
    report["result"] = outcome.status
    if obj.kind == "AEL":
        report["path"] = outcome.diagnostics.get("path", "")
        for key in ("cap", "largest_cap", "reason", "guarantee"):
            if key in outcome.diagnostics:
                report[key] = outcome.diagnostics[key]
    if "minimal_credit" in outcome.diagnostics:
        report["minimal_credit"] = outcome.diagnostics["minimal_credit"]
    if args.value:
        report["value"] = fmt(value)
    if args.witness:
        report["witness"] = _render_witness(g, outcome.witness)
    if args.oracle:
        verdict, method = _oracle(g, obj, outcome)
        report["oracle"] = verdict
        report["oracle_method"] = method
        report["oracle_agrees"] = "yes" if verdict == outcome.status else "no"
    _emit(report, args.json, out)
    return EXIT[outcome.status]


# evaluate / trace ----------------------------------------------------------------

def cmd_evaluate(args, out) -> int:
    g = _read_game(args.input)
    p = lasso_payoffs(g, parse_lasso(g, args.lasso))
    report = {"MPsup": fmt(p.mp_sup), "MPinf": fmt(p.mp_inf), "TPsup": fmt(p.tp_sup),
              "TPinf": fmt(p.tp_inf), "AEsup": fmt(p.ae_sup), "AEinf": fmt(p.ae_inf)}
    _emit(report, args.json, out)
    return 0


def cmd_trace(args, out) -> int:
    g = _read_game(args.input)
    if args.steps < 0:
        raise UsageError("--steps must be nonnegative")
    lasso = parse_lasso(g, args.lasso)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["step", "state", "energy", "running_ae"])
    for step, s, e, ae in trace_rows(g, lasso, args.steps):
        writer.writerow([step, g.names[s], fmt(Fraction(e)), "" if ae is None else fmt(ae)])
    out.write(buf.getvalue())
    return 0


# generate ------------------------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _countdown_edges(text: str) -> tuple[tuple[int, int, int], ...]:
    edges = []
    for part in text.split(";"):
        if part.strip():
            triple = _int_list(part)
            if len(triple) != 3:
                raise UsageError(f"countdown edge {part!r} is not v,d,v'")
            edges.append(triple)
    return tuple(edges)


def cmd_generate(args, out) -> int:
    fam = args.family
    t = None
    try:
        if fam == "mp2ae":
            if args.input is None or args.threshold is None:
                raise UsageError("mp2ae needs --input and --threshold")
            g, t = mp_to_ae(_read_game(args.input), parse_value(args.threshold))
        elif fam == "subsetsum":
            if args.values is None or args.target is None:
                raise UsageError("subsetsum needs --values and --target")
            g, t = subset_sum_to_ael(SubsetSumInstance(_int_list(args.values), args.target))
        elif fam == "countdown":
            if args.edges is None or args.vertices is None or args.c0 is None:
                raise UsageError("countdown needs --vertices, --edges and --c0")
            g, t = countdown_to_ael(CountdownGame(args.vertices, _countdown_edges(args.edges),
                                                  args.init, args.c0))
        elif fam in ("fig5a", "fig5b"):
            if args.param is None:
                raise UsageError(f"{fam} needs --param U")
            g = memory_family(fam.upper(), args.param)
        elif fam == "fig8":
            g = memory_family("FIG8")
        else:
            if args.states is None:
                raise UsageError("random needs --states")
            g = random_game(args.states, args.max_weight, args.p1_fraction,
                            (args.min_degree, args.max_degree), args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = render_game(g)
    if t is not None:
        text = f"# threshold {fmt(t)}\n" + text
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_harness(args, out) -> int:
    records = harness.run(args.count, args.seed)
    n = harness.write_jsonl(records, args.output)
    bad = [r for r in records if not r["agree"]]
    _emit({"records": n, "disagreements": len(bad), "output": args.output}, args.json, out)
    return 0 if not bad else 1


# parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aegames", description="Exact solvers for average-energy games.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an objective from the initial state")
    s.add_argument("--input", required=True)
    s.add_argument("--objective", required=True, choices=["mp", "egl", "eglu", "ae", "aelu", "ael"])
    s.add_argument("--threshold", help="p/q; with --value and no threshold, decide at the value")
    s.add_argument("--upper-bound", type=int)
    s.add_argument("--credit", type=int, default=0, help="initial credit for egl")
    s.add_argument("--u-max", type=int, help="largest cap for two-player ael")
    s.add_argument("--schedule", choices=["doubling", "linear"], default="doubling")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--witness", action="store_true")
    s.add_argument("--value", action="store_true")
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("evaluate", help="payoffs of a lasso play")
    e.add_argument("--input", required=True)
    e.add_argument("--lasso", required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_evaluate)

    tr = sub.add_parser("trace", help="energy trace of a lasso play as CSV")
    tr.add_argument("--input", required=True)
    tr.add_argument("--lasso", required=True)
    tr.add_argument("--steps", type=int, required=True)
    tr.set_defaults(func=cmd_trace)

    gen = sub.add_parser("generate", help="write a generated game file")
    gen.add_argument("--family", required=True,
                     choices=["mp2ae", "subsetsum", "countdown", "fig5a", "fig5b", "fig8", "random"])
    gen.add_argument("--param", type=int)
    gen.add_argument("--input")
    gen.add_argument("--threshold")
    gen.add_argument("--values")
    gen.add_argument("--target", type=int)
    gen.add_argument("--vertices", type=int)
    gen.add_argument("--edges", help="countdown edges 'v,d,v2;v,d,v2'")
    gen.add_argument("--init", type=int, default=0)
    gen.add_argument("--c0", type=int)
    gen.add_argument("--states", type=int)
    gen.add_argument("--max-weight", type=int, default=3)
    gen.add_argument("--p1-fraction", type=float, default=0.5)
    gen.add_argument("--min-degree", type=int, default=1)
    gen.add_argument("--max-degree", type=int, default=2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output")
    gen.set_defaults(func=cmd_generate)

    h = sub.add_parser("harness", help="run solver-vs-oracle comparisons")
    h.add_argument("--count", type=int, default=20)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--output", required=True)
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_harness)
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (GameFormatError, LassoError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (OracleBudgetError, RuntimeError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
