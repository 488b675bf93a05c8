"""Game arenas: data model, validation, text format and random generation.

A game is a finite directed graph whose states are split between player 1
(the minimizer of energy-style payoffs) and player 2.  States are stored by
dense index; names are only used at the boundaries (files, reports).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

P1 = 1
P2 = 2

_NAME_RE = re.compile(r"^[A-Za-z0-9_.'\-@~:+<>]+$")


class GameFormatError(ValueError):
    """Raised by `parse_game`.  `code` identifies the kind of problem."""

    SYNTAX = "syntax"
    DUPLICATE_STATE = "duplicate-state"
    DUPLICATE_EDGE = "duplicate-edge"
    DANGLING = "dangling-endpoint"
    DEADLOCK = "deadlock"
    MISSING_INIT = "missing-init"

    def __init__(self, code: str, message: str, line: int | None = None,
                 column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(f"{where}{message}")
        self.code = code
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Violation:
    kind: str      # DanglingEdge, DuplicateEdge, Deadlock, BadInit, BadOwner, DuplicateName
    detail: str


@dataclass(frozen=True, eq=True)
class GameGraph:
    """Immutable weighted game arena.

    `names[i]` and `owners[i]` describe state i; `edges` holds
    (src, dst, weight) triples over state indices.
    """
    names: tuple[str, ...]
    owners: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    init: int
    _succ: tuple = field(default=(), compare=False, repr=False)
    _weight: dict = field(default_factory=dict, compare=False, repr=False)
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        succ: list[list[int]] = [[] for _ in self.names]
        weight: dict[tuple[int, int], int] = {}
        for u, v, w in self.edges:
            if 0 <= u < len(succ):
                succ[u].append(v)
            weight[(u, v)] = w
        for lst in succ:
            lst.sort()
        object.__setattr__(self, "_succ", tuple(tuple(x) for x in succ))
        object.__setattr__(self, "_weight", weight)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    # construction helpers -------------------------------------------------

    @classmethod
    def build(cls, states: Iterable[tuple[str, int]],
              edges: Iterable[tuple[str, str, int]], init: str) -> "GameGraph":
        """Build from named states/edges.  Raises ValueError if invalid."""
        states = list(states)
        names = tuple(n for n, _ in states)
        owners = tuple(o for _, o in states)
        index = {n: i for i, n in enumerate(names)}
        try:
            triples = tuple(sorted((index[a], index[b], int(w)) for a, b, w in edges))
            g = cls(names, owners, triples, index[init])
        except KeyError as exc:
            raise ValueError(f"unknown state {exc.args[0]!r}") from None
        problems = validate(g)
        if problems:
            raise ValueError("; ".join(f"{p.kind}: {p.detail}" for p in problems))
        return g

    # queries --------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.names)

    def succ(self, s: int) -> tuple[int, ...]:
        return self._succ[s]

    def w(self, u: int, v: int) -> int:
        return self._weight[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._weight

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no state named {name!r}") from None

    def owner_set(self) -> set[int]:
        return set(self.owners)

    def sole_owner(self) -> int | None:
        """The only owner if the game is one-player, else None."""
        owners = self.owner_set()
        return owners.pop() if len(owners) == 1 else None

    def with_weights(self, fn) -> "GameGraph":
        """Copy with every weight replaced by fn(u, v, w)."""
        return GameGraph(self.names, self.owners,
                         tuple((u, v, fn(u, v, w)) for u, v, w in self.edges), self.init)

    def with_init(self, init: int) -> "GameGraph":
        return GameGraph(self.names, self.owners, self.edges, init)

    def negated(self) -> "GameGraph":
        return self.with_weights(lambda u, v, w: -w)

    def swapped_owners(self) -> "GameGraph":
        return GameGraph(self.names, tuple(3 - o for o in self.owners), self.edges, self.init)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Objective with its parameters.  `kind` is one of MP, EGL, EGLU, AE, AELU, AEL."""
    kind: str
    threshold: Fraction | None = None
    upper: int | None = None
    credit: int = 0

    KINDS = ("MP", "EGL", "EGLU", "AE", "AELU", "AEL")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown objective {self.kind!r}")
        needs_t = self.kind in ("MP", "AE", "AELU", "AEL")
        needs_u = self.kind in ("EGLU", "AELU")
        if needs_t != (self.threshold is not None):
            raise ValueError(f"{self.kind}: threshold {'required' if needs_t else 'not allowed'}")
        if needs_t and not isinstance(self.threshold, (int, Fraction)):
            raise ValueError("threshold must be a finite rational")
        if needs_u != (self.upper is not None):
            raise ValueError(f"{self.kind}: upper bound {'required' if needs_u else 'not allowed'}")
        if self.upper is not None and self.upper < 0:
            raise ValueError("upper bound must be nonnegative")
        if self.credit < 0 or (self.credit and self.kind != "EGL"):
            raise ValueError("initial credit is a nonnegative integer and only used by EGL")
        if needs_t:
            object.__setattr__(self, "threshold", Fraction(self.threshold))


def validate(g: GameGraph) -> list[Violation]:
    out: list[Violation] = []
    n = len(g.names)
    if len(g.owners) != n:
        out.append(Violation("BadOwner", "owner list length differs from state list"))
    seen_names = set()
    for name in g.names:
        if not name or name in seen_names:
            out.append(Violation("DuplicateName", repr(name)))
        seen_names.add(name)
    for i, o in enumerate(g.owners):
        if o not in (P1, P2):
            out.append(Violation("BadOwner", f"state {i} owner {o!r}"))
    if not (0 <= g.init < n):
        out.append(Violation("BadInit", f"init index {g.init}"))
    pairs = set()
    has_out = [False] * n
    for u, v, _ in g.edges:
        if not (0 <= u < n and 0 <= v < n):
            out.append(Violation("DanglingEdge", f"{u}->{v}"))
            continue
        if (u, v) in pairs:
            out.append(Violation("DuplicateEdge", f"{g.names[u]}->{g.names[v]}"))
        pairs.add((u, v))
        has_out[u] = True
    for i in range(n):
        if not has_out[i]:
            out.append(Violation("Deadlock", g.names[i]))
    return out


def max_abs_weight(g: GameGraph) -> int:
    return max((abs(w) for _, _, w in g.edges), default=0)


# text format ----------------------------------------------------------------

def parse_game(text: str | bytes) -> GameGraph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    states: list[tuple[str, int]] = []
    state_line: dict[str, int] = {}
    raw_edges: list[tuple[str, str, int, int]] = []
    edge_seen: set[tuple[str, str]] = set()
    init: tuple[str, int] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not toks:
            continue
        head, col = toks[0]

        def bad(msg, c=col):
            return GameFormatError(GameFormatError.SYNTAX, msg, lineno, c)

        if head == "state":
            if len(toks) != 3:
                raise bad("expected: state <name> <1|2>")
            name, owner = toks[1][0], toks[2]
            if not _NAME_RE.match(name):
                raise bad(f"bad state name {name!r}", toks[1][1])
            if owner[0] not in ("1", "2"):
                raise bad(f"owner must be 1 or 2, got {owner[0]!r}", owner[1])
            if name in state_line:
                raise GameFormatError(GameFormatError.DUPLICATE_STATE,
                                      f"state {name!r} already declared on line {state_line[name]}",
                                      lineno, toks[1][1])
            state_line[name] = lineno
            states.append((name, int(owner[0])))
        elif head == "init":
            if len(toks) != 2:
                raise bad("expected: init <name>")
            if init is not None:
                raise bad("init declared twice")
            init = (toks[1][0], lineno)
        elif head == "edge":
            if len(toks) != 4:
                raise bad("expected: edge <src> <dst> <weight>")
            wtok, wcol = toks[3]
            if not re.fullmatch(r"[+-]?\d+", wtok):
                raise bad(f"weight must be an integer, got {wtok!r}", wcol)
            a, b = toks[1][0], toks[2][0]
            if (a, b) in edge_seen:
                raise GameFormatError(GameFormatError.DUPLICATE_EDGE,
                                      f"second edge {a} -> {b}", lineno, col)
            edge_seen.add((a, b))
            raw_edges.append((a, b, int(wtok), lineno))
        else:
            raise bad(f"unknown declaration {head!r}")

    if init is None:
        raise GameFormatError(GameFormatError.MISSING_INIT, "no init declaration")
    if init[0] not in state_line:
        raise GameFormatError(GameFormatError.DANGLING, f"init state {init[0]!r} not declared",
                              init[1])
    for a, b, _, lineno in raw_edges:
        for x in (a, b):
            if x not in state_line:
                raise GameFormatError(GameFormatError.DANGLING, f"undeclared state {x!r}", lineno)
    with_out = {a for a, _, _, _ in raw_edges}
    for name, _ in states:
        if name not in with_out:
            raise GameFormatError(GameFormatError.DEADLOCK,
                                  f"state {name!r} has no outgoing edge", state_line[name])
    return GameGraph.build(states, [(a, b, w) for a, b, w, _ in raw_edges], init[0])


def render_game(g: GameGraph) -> str:
    lines = [f"state {name} {owner}" for name, owner in zip(g.names, g.owners)]
    lines.append(f"init {g.names[g.init]}")
    lines += [f"edge {g.names[u]} {g.names[v]} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


# random games ---------------------------------------------------------------

def random_game(num_states: int, max_w: int, p1_fraction: float,
                out_degree: tuple[int, int], seed: int) -> GameGraph:
    """Reproducible random arena; states are named s0, s1, ..."""
    lo, hi = out_degree
    if num_states < 1 or max_w < 0 or lo < 1 or hi < lo:
        raise ValueError("infeasible parameters for random_game")
    if lo > num_states:
        raise ValueError("minimum out-degree exceeds the number of states")
    if not 0.0 <= p1_fraction <= 1.0:
        raise ValueError("p1_fraction must lie in [0, 1]")
    rng = random.Random(seed)
    hi = min(hi, num_states)
    owners = [P1 if rng.random() < p1_fraction else P2 for _ in range(num_states)]
    edges = []
    for u in range(num_states):
        for v in sorted(rng.sample(range(num_states), rng.randint(lo, hi))):
            edges.append((u, v, rng.randint(-max_w, max_w)))
    names = tuple(f"s{i}" for i in range(num_states))
    return GameGraph(names, tuple(owners), tuple(edges), 0)
