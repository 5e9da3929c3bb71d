"""Element access on capsules: ``at(env, sv, i)`` and prefix extraction.

The derivation is carried out by the kernels over a compiled graph of the
environment, with an explicit work stack, so deep indexes do not touch the
interpreter's recursion limit.  Within one query, a table of already
computed (variable, index) pairs is kept; asking again for an entry whose
computation is still in progress means the derivation can never finish,
which is reported as :class:`DivergentAccess` instead of spinning until
the budget runs out.
"""

from __future__ import annotations

import os

from . import kernels
from .errors import EvalError
from .graph import compile_graph

DEFAULT_BUDGET = 1_000_000


def default_budget() -> int:
    """Step limit from ``CSTREAM_BUDGET`` if set, else 10**6."""
    raw = os.environ.get("CSTREAM_BUDGET")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"CSTREAM_BUDGET must be an integer, got {raw!r}") from None
        if value <= 0:
            raise ValueError("CSTREAM_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


def index_many(env: dict, sv, indices, budget: int | None = None, *, stats=None, backend=None):
    """Elements ``indices`` of ``sv`` under ``env``; returns ``(values, steps)``.

    ``steps`` is the number of rule applications performed.  Passing a
    Counter as ``stats`` records how often each rule fired (this runs the
    pure-Python kernel, which is the only one that counts).
    """
    if budget is None:
        budget = default_budget()
    indices = list(indices)
    for i in indices:
        if type(i) is not int or i < 0:
            raise ValueError(f"index must be a natural number, got {i!r}")
    if not indices:
        return [], 0
    g, (root,) = compile_graph(env, [sv])
    k = kernels.get_backend("python" if stats is not None else backend)
    return k.index(g, root, indices, budget, stats)


def at(env: dict, sv, i: int, budget: int | None = None, *, stats=None, backend=None):
    """The ``i``-th element of the stream value ``sv`` under ``env``.

    Raises OpenIndexAccess on a variable without a definition,
    DivergentAccess when the element depends on itself, BudgetExceeded
    after ``budget`` rule applications, and DivisionByZero from ``[/]``.
    """
    values, _ = index_many(env, sv, [i], budget, stats=stats, backend=backend)
    return values[0]


def take(env: dict, sv, k: int, budget: int | None = None, *, stats=None, backend=None) -> list:
    """The first ``k`` elements; element ``j`` equals ``at(env, sv, j)``.

    Stops at the first failing index; the raised error carries it as
    ``err.request``.  The budget bounds the whole prefix.
    """
    if k < 0:
        raise ValueError("prefix length must be non-negative")
    values, _ = index_many(env, sv, range(k), budget, stats=stats, backend=backend)
    return values


def failing_index(err: EvalError):
    """The requested index an indexing error is about, if known."""
    return getattr(err, "request", None)
