import random
from pathlib import Path

import pytest

from aegames.game import GameGraph, P1, parse_game, random_game

GAMES = Path(__file__).parent / "games"
GOLDEN = Path(__file__).parent / "golden"


def load(name: str) -> GameGraph:
    return parse_game((GAMES / f"{name}.game").read_text())


def potential_game(n: int, max_w: int, seed: int, noise: int = 0) -> GameGraph:
    """One-player game whose cycles are (nearly) all zero: w(u,v) = p(v) - p(u),
    plus an optional nonnegative perturbation in [0, noise]."""
    rng = random.Random(seed)
    base = random_game(n, 1, 1.0, (1, 2), seed)
    pot = [rng.randint(0, max(max_w, 1)) for _ in range(n)]
    edges = []
    for u, v, _ in base.edges:
        w = pot[v] - pot[u] + rng.randint(0, noise)
        edges.append((u, v, max(-max_w, min(max_w, w))))
    return GameGraph(base.names, tuple(P1 for _ in range(n)), tuple(edges), 0)


@pytest.fixture
def fig1_left():
    return load("fig1_left")


@pytest.fixture
def fig1_right():
    return load("fig1_right")


@pytest.fixture
def fig2a():
    return load("fig2a")


@pytest.fixture
def fig3():
    return load("fig3")


@pytest.fixture
def fig8():
    return load("fig8")
