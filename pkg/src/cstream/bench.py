"""Worst-case environments for the two checkers, and a timing harness.

cons-chain(n)
    ``x0 = 0:x1, x1 = 0:x2, ..., x{n-1} = 0:x0``.  One path visits every
    variable, so the counter check updates 1, 2, ..., n counters: O(n^2),
    against O(n) for the path check.

nop-chain(k)
    ``x{i} = 0:(x{i+1}[+]x{i+1})`` for ``i < k`` and ``xk = 0:x0``.  Every
    variable is met afresh in both operands, so the derivation has
    ``3 * 2**(k+1) - 3`` nodes but depth only O(k).  For this family the
    ``size`` passed in is the wanted number of derivation nodes, and the
    nearest ``k`` is used.

Timings are of the check kernels alone, on graphs compiled beforehand; each
is the best per-call time over several ``timeit`` auto-ranged runs.
"""

from __future__ import annotations

import csv
import math
import sys
import timeit

from . import kernels
from .graph import compile_graph
from .values import SCons, SPointwise, SVar

FAMILIES = ("cons-chain", "nop-chain")


def cons_chain(n: int) -> dict:
    if n < 1:
        raise ValueError("chain length must be positive")
    return {f"x{i}": SCons(0, SVar(f"x{(i + 1) % n}")) for i in range(n)}


def nop_chain(k: int) -> dict:
    if k < 0:
        raise ValueError("chain length must be non-negative")
    env = {}
    for i in range(k):
        nxt = SVar(f"x{i + 1}")
        env[f"x{i}"] = SCons(0, SPointwise(nxt, "+", nxt))
    env[f"x{k}"] = SCons(0, SVar("x0"))
    return env


def nop_chain_nodes(k: int) -> int:
    """Nodes in the derivation for ``nop_chain(k)`` rooted at ``x0``."""
    return 3 * 2 ** (k + 1) - 3


def nop_chain_length(size: int) -> int:
    """Chain length whose derivation size is nearest to ``size`` nodes."""
    return max(0, round(math.log2(max(size, 1) / 6 + 0.5)))


def family_env(family: str, size: int) -> dict:
    if family == "cons-chain":
        return cons_chain(size)
    if family == "nop-chain":
        return nop_chain(nop_chain_length(size))
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _per_call(fn, repeats: int, min_time: float) -> float:
    timer = timeit.Timer(fn)
    best = math.inf
    for _ in range(repeats):
        number = 1
        while True:
            elapsed = timer.timeit(number)
            if elapsed >= min_time:
                break
            number *= 2 if elapsed * 4 > min_time else 8
        best = min(best, elapsed / number)
    return best


def time_checkers(env: dict, root: str = "x0", *, backend=None, repeats: int = 5,
                  min_time: float = 0.05) -> tuple:
    """Best per-call seconds of ``(naive, optimized)`` on ``env``."""
    k = kernels.get_backend(backend)
    g, (start,) = compile_graph(env, [SVar(root)])
    naive_ok = k.naive_check(g, start)
    opt_ok = k.opt_check(g, start)
    if naive_ok != opt_ok:
        raise AssertionError(f"checkers disagree: naive={naive_ok} optimized={opt_ok}")
    naive = _per_call(lambda: k.naive_check(g, start), repeats, min_time)
    opt = _per_call(lambda: k.opt_check(g, start), repeats, min_time)
    return naive, opt


def run(family: str, sizes, *, backend=None, repeats: int = 5, min_time: float = 0.05) -> list:
    """Rows ``(family, size, naive_ms, optimized_ms)``."""
    rows = []
    for size in sizes:
        if size < 1:
            raise ValueError("sizes must be positive")
        naive, opt = time_checkers(family_env(family, size), backend=backend,
                                   repeats=repeats, min_time=min_time)
        rows.append((family, size, naive * 1e3, opt * 1e3))
    return rows


def write_csv(rows, out=None):
    w = csv.writer(out or sys.stdout, lineterminator="\n")
    w.writerow(("family", "size", "naive_ms", "optimized_ms"))
    for family, size, naive, opt in rows:
        w.writerow((family, size, f"{naive:.4f}", f"{opt:.4f}"))


def doubling_ratios(rows, column: int) -> list:
    """Time ratios between consecutive rows (meaningful when sizes double)."""
    return [b[column] / a[column] for a, b in zip(rows, rows[1:])]
