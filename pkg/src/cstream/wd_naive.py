"""Counter-map well-definedness check.

``sv : m`` is judged with ``m`` mapping each variable met so far on the
current path to (constructors + right interleave operands) - tails
traversed since. A repeated variable is accepted only if its counter is
positive, and free variables are always accepted. Every constructor or tail
updates every counter, so a path of length N costs O(N^2). This is
deliberate: the optimized module exists to beat it.

Only the deterministic rules are executed. The rule that re-enters a
repeated variable instead of accepting it never changes the verdict, so it
is available only in :func:`judge_with_delay`, a bounded reference mode for
tests.
"""

from __future__ import annotations

from . import kernels
from .graph import compile_graph
from .values import SCons, SInterleave, SPointwise, STail, SVar


def wd_gate(env: dict, x: str, v, *, backend=None) -> bool:
    """Does binding ``x`` to ``v`` keep ``env`` well-defined?"""
    if x in env and env[x] != v:
        raise ValueError(f"{x} is already bound to a different value")
    extended = dict(env)
    extended[x] = v
    return wd_judge(extended, SVar(x), {}, backend=backend)


def wd_judge(env: dict, sv, m=None, *, observe=None, backend=None) -> bool:
    """Verdict of ``sv : m`` under ``env``; ``m`` defaults to the empty map.

    ``observe(node, counts)`` (optional) sees the counter map before every
    node visit; it forces the pure-Python kernel.
    """
    m = dict(m or {})
    for name in m:
        assert name in env, f"counter for {name}, which has no definition"
    g, roots = compile_graph(env, [sv] + [SVar(name) for name in m])
    ids = [g.var_id(name) for name in m]
    k = kernels.get_backend("python" if observe is not None else backend)
    return k.naive_check(g, roots[0], ids, list(m.values()), observe)


def judge_rules(env: dict, sv, m=None) -> bool:
    """Direct transcription of the rules over the stream value tree.

    Recursive and unoptimized; the reference the kernels are tested against.
    """
    m = dict(m or {})
    t = type(sv)
    if t is SVar:
        x = sv.name
        if x not in env:
            return True
        if x in m:
            return m[x] > 0
        m[x] = 0
        return judge_rules(env, env[x], m)
    if t is SCons:
        return judge_rules(env, sv.tail, {x: n + 1 for x, n in m.items()})
    if t is STail:
        return judge_rules(env, sv.arg, {x: n - 1 for x, n in m.items()})
    if t is SPointwise:
        return judge_rules(env, sv.left, m) and judge_rules(env, sv.right, m)
    if t is SInterleave:
        return judge_rules(env, sv.left, m) and judge_rules(
            env, sv.right, {x: n + 1 for x, n in m.items()}
        )
    raise TypeError(f"not a stream value: {sv!r}")


def judge_with_delay(env: dict, sv, m=None, max_delays: int = 1) -> bool:
    """Judgment where a repeated variable with a positive counter is re-entered.

    Up to ``max_delays`` times per path, such a variable is reset to 0 and its
    definition checked again, instead of being accepted on the spot. A
    derivation found this way can always be shortened into one without
    re-entry, so a ``True`` here implies a ``True`` from :func:`wd_judge`.
    """
    m = dict(m or {})
    t = type(sv)
    if t is SVar:
        x = sv.name
        if x not in env:
            return True
        if x in m:
            if m[x] <= 0:
                return False
            if max_delays <= 0:
                return True
            m[x] = 0
            return judge_with_delay(env, env[x], m, max_delays - 1)
        m[x] = 0
        return judge_with_delay(env, env[x], m, max_delays)
    if t is SCons:
        return judge_with_delay(env, sv.tail, {x: n + 1 for x, n in m.items()}, max_delays)
    if t is STail:
        return judge_with_delay(env, sv.arg, {x: n - 1 for x, n in m.items()}, max_delays)
    if t is SPointwise:
        return judge_with_delay(env, sv.left, m, max_delays) and judge_with_delay(
            env, sv.right, m, max_delays
        )
    if t is SInterleave:
        return judge_with_delay(env, sv.left, m, max_delays) and judge_with_delay(
            env, sv.right, {x: n + 1 for x, n in m.items()}, max_delays
        )
    raise TypeError(f"not a stream value: {sv!r}")
