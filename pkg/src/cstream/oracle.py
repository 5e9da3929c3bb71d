"""Reference semantics for cross-checking the indexer and the checkers.

:func:`prefix_eval` computes stream elements straight from the equations
that define what a capsule denotes: the head of a cons at 0, the tail
shifting by one, pointwise operators elementwise, and interleaving
splitting even and odd positions.  It recurses over the stream-value trees
on demand, with a (variable, index) table, which is a different algorithm
from the indexer's explicit-stack rule derivation over a compiled graph.

Multiplication by an element that is 0 is 0 without evaluating the other
operand, so ``{x = y[*]x, y = 0:y}`` is total here as it is
mathematically, while the operational checks reject it.

The module also generates environments: exhaustively for small sizes,
and by seeded random sampling beyond.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from . import indexer
from ._deep import run_deep
from .errors import DivisionByZero, EvalError
from .runtime import stream_to_json
from .values import (
    SCons,
    SInterleave,
    SPointwise,
    STail,
    SVar,
    apply_numop,
    format_num,
    show_stream,
    stream_vars,
)
from .wd_naive import wd_judge
from .wd_optimized import owd_judge

COMPLETE, DIVERGED, ERROR = "complete", "diverged", "error"
DEFAULT_MAX_DEPTH = 5_000


@dataclass(frozen=True)
class PrefixStream:
    """``elements`` for indexes ``0 .. len-1``; ``index`` is where it stopped."""

    elements: tuple
    status: str = COMPLETE
    index: int | None = None
    reason: str = ""

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    def __str__(self):
        shown = " ".join(format_num(q) for q in self.elements)
        if self.complete:
            return shown
        return f"{shown} ... {self.status} at {self.index}: {self.reason}".strip()


class _Stop(Exception):
    def __init__(self, status, reason):
        super().__init__(reason)
        self.status = status
        self.reason = reason


_BUSY = object()


class _Denotation:
    def __init__(self, env, free, budget, max_depth):
        self.env = env
        self.free = free or {}
        self.budget = budget
        self.max_depth = max_depth
        self.memo = {}
        self.steps = 0
        self.depth = 0

    def elem(self, sv, i):
        self.steps += 1
        if self.steps > self.budget:
            raise _Stop(DIVERGED, f"no result within {self.budget} steps")
        t = type(sv)
        if t is SVar:
            return self.var(sv.name, i)
        if t is SCons:
            return sv.head if i == 0 else self.elem(sv.tail, i - 1)
        if t is STail:
            return self.elem(sv.arg, i + 1)
        if t is SInterleave:
            return self.elem(sv.left, i // 2) if i % 2 == 0 else self.elem(sv.right, i // 2)
        if t is SPointwise:
            if sv.op == "*":
                return self.product(sv, i)
            a = self.elem(sv.left, i)
            b = self.elem(sv.right, i)
            try:
                return apply_numop(sv.op, a, b)
            except DivisionByZero as err:
                raise _Stop(ERROR, str(err)) from None
        raise TypeError(f"not a stream value: {sv!r}")

    def product(self, sv, i):
        try:
            a = self.elem(sv.left, i)
        except _Stop as stop:
            if stop.status == DIVERGED and self.elem(sv.right, i) == 0:
                return 0
            raise
        if a == 0:
            return 0
        return a * self.elem(sv.right, i)

    def var(self, x, i):
        if x not in self.env:
            prefix = self.free.get(x)
            if prefix is None:
                raise _Stop(ERROR, f"free variable {x}")
            if i >= len(prefix):
                raise _Stop(ERROR, f"prefix of {x} has no element {i}")
            return prefix[i]
        key = (x, i)
        got = self.memo.get(key)
        if got is _BUSY:
            raise _Stop(DIVERGED, f"{x}({i}) depends on itself")
        if got is not None:
            return got
        if self.depth >= self.max_depth:
            raise _Stop(DIVERGED, f"demand chain deeper than {self.max_depth}")
        self.memo[key] = _BUSY
        self.depth += 1
        try:
            value = self.elem(self.env[x], i)
        finally:
            self.depth -= 1
            if self.memo.get(key) is _BUSY:
                del self.memo[key]
        self.memo[key] = value
        return value


def prefix_eval(env: dict, sv, k: int, budget: int = 1_000_000, free=None,
                max_depth: int = DEFAULT_MAX_DEPTH) -> PrefixStream:
    """Elements ``0 .. k-1`` of what ``sv`` denotes under ``env``.

    ``free`` maps free variables to finite prefixes (sequences) standing
    for their streams.  Stops at the first index whose value depends on
    itself, needs more than ``budget`` steps or ``max_depth`` nested
    variable unfoldings (status ``diverged``), or hits a division by zero
    or missing free-variable data (status ``error``).
    """
    if k < 0:
        raise ValueError("prefix length must be non-negative")
    free = {x: tuple(p) for x, p in (free or {}).items()}

    def go():
        d = _Denotation(env, free, budget, max_depth)
        out = []
        for i in range(k):
            try:
                out.append(d.elem(sv, i))
            except _Stop as stop:
                return PrefixStream(tuple(out), stop.status, i, stop.reason)
        return PrefixStream(tuple(out))

    return run_deep(go)


# ---------------------------------------------------------------- generators


def _trees(n, leaves, cache):
    """All stream values with exactly ``n`` operator nodes over ``leaves``."""
    if n in cache:
        return cache[n]
    if n == 0:
        out = [SVar(x) for x in leaves]
    else:
        out = []
        for t in _trees(n - 1, leaves, cache):
            out.append(SCons(0, t))
            out.append(SCons(1, t))
            out.append(STail(t))
        for p in range(n):
            for a in _trees(p, leaves, cache):
                for b in _trees(n - 1 - p, leaves, cache):
                    out.append(SPointwise(a, "+", b))
                    out.append(SInterleave(a, b))
    cache[n] = out
    return out


def _first_reach_order(env, root):
    order, seen, todo = [], set(), [root]
    while todo:
        x = todo.pop()
        if x in seen:
            continue
        seen.add(x)
        order.append(x)
        # depth-first, left to right
        todo.extend(reversed(_leaf_order(env[x])))
    return order


def _leaf_order(sv):
    out, stack = [], [sv]
    while stack:
        s = stack.pop()
        t = type(s)
        if t is SVar:
            out.append(s.name)
        elif t is SCons:
            stack.append(s.tail)
        elif t is STail:
            stack.append(s.arg)
        else:
            stack.append(s.right)
            stack.append(s.left)
    return out


def enumerate_envs(max_vars: int, max_depth: int):
    """Every closed environment up to the given size, once up to renaming.

    Variables are ``x0 .. x{n-1}`` for ``n = 1 .. max_vars`` and the root is
    ``x0``.  ``max_depth`` bounds the total number of operator nodes
    (``:``, ``^``, ``[+]``, ``||``) over all definitions; cons heads are 0
    or 1.  Only environments in which every variable is reachable from the
    root are produced, named in order of first reach (depth-first, left to
    right), which makes each one the unique representative of its renaming
    class.  Yields ``(env, "x0")`` in a fixed order.
    """
    if max_vars < 1 or max_depth < 0:
        return
    for n in range(1, max_vars + 1):
        names = [f"x{j}" for j in range(n)]
        cache = {}
        for sizes in itertools.product(range(max_depth + 1), repeat=n):
            if sum(sizes) > max_depth:
                continue
            for defs in itertools.product(*(_trees(s, names, cache) for s in sizes)):
                env = dict(zip(names, defs))
                if _first_reach_order(env, "x0") == names:
                    yield env, "x0"


def random_tree(rng: random.Random, names, depth: int, leaf_p: float = 0.3):
    if depth <= 0 or rng.random() < leaf_p:
        return SVar(rng.choice(names))
    r = rng.random()
    if r < 0.35:
        return SCons(rng.choice((0, 1, 2)), random_tree(rng, names, depth - 1, leaf_p))
    if r < 0.5:
        return STail(random_tree(rng, names, depth - 1, leaf_p))
    left = random_tree(rng, names, depth - 1, leaf_p)
    right = random_tree(rng, names, depth - 1, leaf_p)
    if r < 0.75:
        return SPointwise(left, rng.choice(("+", "-")), right)
    return SInterleave(left, right)


def random_envs(seed: int, count: int, max_vars: int = 6, max_depth: int = 6):
    """``count`` seeded closed environments, rooted at ``x0``.

    Each has 1 to ``max_vars`` variables whose definitions are random trees
    of height at most ``max_depth`` using all five constructors.  The
    pointwise operators are ``+`` and ``-``: with ``*`` an equation such as
    ``x = 2:(x[*]x)`` has elements of 2**i bits, and ``/`` could make an
    accepted environment fail on a zero divisor.
    """
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_vars)
        names = [f"x{j}" for j in range(n)]
        env = {x: random_tree(rng, names, rng.randint(1, max_depth)) for x in names}
        yield env, "x0"


# ---------------------------------------------------------------- cross-validation

AGREE = "agree"
REJECTED_DIVERGES = "rejected-diverges"
INCOMPLETENESS_WITNESS = "incompleteness-witness"
SOUNDNESS_VIOLATION = "soundness-violation"
VALUE_MISMATCH = "value-mismatch"
CHECKER_MISMATCH = "checker-mismatch"
FAILURES = (SOUNDNESS_VIOLATION, VALUE_MISMATCH, CHECKER_MISMATCH)


def cross_validate(env: dict, root: str, k: int = 50, budget: int = 1_000_000,
                   oracle_budget: int = 200_000) -> dict:
    """Run both checkers on ``root`` and compare the indexer with the oracle.

    An accepted environment must give ``k`` elements from the indexer,
    equal to the oracle's.  Anything else is a soundness violation or
    value mismatch.  A rejected environment is expected to make the oracle
    diverge; when the oracle is total instead, the case is an
    incompleteness witness, which is allowed.
    """
    missing = set().union(*(stream_vars(v) for v in env.values())) - env.keys()
    if missing or root not in env:
        raise ValueError(f"environment is not closed: missing {sorted(missing or {root})}")
    sv = SVar(root)
    naive = wd_judge(env, sv)
    optimized = owd_judge(env, sv)
    report = {
        "root": root,
        "env": {x: show_stream(v) for x, v in env.items()},
        "naive": naive,
        "optimized": optimized,
    }
    oracle = prefix_eval(env, sv, k, oracle_budget)
    report["oracle"] = str(oracle)
    if naive != optimized:
        report["outcome"] = CHECKER_MISMATCH
        return report
    if not naive:
        report["outcome"] = INCOMPLETENESS_WITNESS if oracle.complete else REJECTED_DIVERGES
        return report
    try:
        values = indexer.take(env, sv, k, budget)
    except EvalError as err:
        report["indexer"] = err.diagnostic()
        report["outcome"] = SOUNDNESS_VIOLATION
        return report
    report["indexer"] = " ".join(format_num(q) for q in values)
    if not oracle.complete:
        report["outcome"] = SOUNDNESS_VIOLATION
    elif list(oracle.elements) != values:
        report["outcome"] = VALUE_MISMATCH
    else:
        report["outcome"] = AGREE
    return report


def report_line(report: dict) -> str:
    """One JSON line for a cross-validation report."""
    return json.dumps(report, sort_keys=True)


def env_to_json(env: dict, root: str) -> dict:
    """Capsule-style JSON for an environment rooted at ``root``."""
    return {"root": stream_to_json(SVar(root)),
            "env": [{"var": x, "val": stream_to_json(v)} for x, v in env.items()]}
