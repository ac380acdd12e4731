"""Work budgets and run metrics, shared via a context variable.

Long-running searches (branch and bound, bisection integration) charge nodes
against the active budget and raise Timeout when it is exhausted; polynomial
operations report their working degree so benchmark rows can record it.
"""

from __future__ import annotations

import contextlib
import contextvars
import time
from dataclasses import dataclass, field

from .errors import Timeout

DEFAULT_NODE_BUDGET = 1 << 24
DEFAULT_DEGREE_CAP = 1 << 14


@dataclass
class RunStats:
    nodes: int = 0
    max_degree: int = 0


@dataclass
class Budget:
    node_budget: int = DEFAULT_NODE_BUDGET
    degree_cap: int = DEFAULT_DEGREE_CAP
    deadline: float | None = None
    stats: RunStats = field(default_factory=RunStats)


_active = contextvars.ContextVar("rigfun_budget", default=Budget())


def active_budget() -> Budget:
    return _active.get()


@contextlib.contextmanager
def budget(node_budget: int = DEFAULT_NODE_BUDGET,
           degree_cap: int = DEFAULT_DEGREE_CAP,
           wall_seconds: float | None = None):
    """Install a fresh budget; yields its RunStats for inspection."""
    deadline = time.monotonic() + wall_seconds if wall_seconds else None
    b = Budget(node_budget, degree_cap, deadline)
    token = _active.set(b)
    try:
        yield b.stats
    finally:
        _active.reset(token)


def charge_nodes(k: int = 1) -> None:
    b = _active.get()
    b.stats.nodes += k
    if b.stats.nodes > b.node_budget:
        raise Timeout(f"node budget {b.node_budget} exhausted")
    if b.deadline is not None and time.monotonic() > b.deadline:
        raise Timeout("wall-clock budget exhausted")


def note_degree(d: int) -> None:
    b = _active.get()
    if d > b.stats.max_degree:
        b.stats.max_degree = d
    if d > b.degree_cap:
        raise Timeout(f"degree cap {b.degree_cap} exceeded (degree {d})")
