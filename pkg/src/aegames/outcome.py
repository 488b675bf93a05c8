from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

WIN = "WIN"
LOSE = "LOSE"
UNKNOWN = "UNKNOWN"


@dataclass
class SolveOutcome:
    """Result of a solver call.

    `status` is WIN/LOSE/UNKNOWN from P1's point of view, or None for pure
    value computations.  `witness` is a Lasso, MemorylessStrategy or
    MooreStrategy depending on the solver; `diagnostics` carries anything
    else worth reporting (path taken, bounds tried, timings).
    """
    status: str | None
    value: Any = None
    witness: Any = None
    diagnostics: dict = field(default_factory=dict)
