"""Index-map and path well-definedness check.

Instead of a counter per variable, the state is a path of +1 (constructor,
right interleave operand) and -1 (tail) steps, plus, per variable, the
path length at its first visit.  A repeated variable is accepted iff the
path suffix since that point sums to a positive number, so inner nodes do
O(1) work.  The kernels keep running prefix sums next to the path, which
makes each suffix sum O(1) as well; :func:`path_sum` is the literal
recursive definition the prefix-sum form is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import accumulate

from . import kernels
from .graph import compile_graph
from .values import SCons, SInterleave, SPointwise, STail, SVar


@dataclass(frozen=True)
class OptState:
    beta: dict = field(default_factory=dict)  # variable -> path length at first visit
    path: tuple = ()  # of +1 / -1

    def __post_init__(self):
        for step in self.path:
            if step not in (1, -1):
                raise ValueError(f"path steps are +1 or -1, got {step!r}")
        for x, i in self.beta.items():
            if not 0 <= i <= len(self.path):
                raise ValueError(f"index {i} of {x} is outside the path")


def owd_gate(env: dict, x: str, v, *, backend=None) -> bool:
    """Does binding ``x`` to ``v`` keep ``env`` well-defined?"""
    if x in env and env[x] != v:
        raise ValueError(f"{x} is already bound to a different value")
    extended = dict(env)
    extended[x] = v
    return owd_judge(extended, SVar(x), OptState(), backend=backend)


def owd_judge(env: dict, sv, st: OptState | None = None, *, observe=None, backend=None) -> bool:
    """Verdict of ``sv`` under ``env`` starting from state ``st``.

    ``observe(node, beta, path)`` (optional) sees the state before every
    node visit; it forces the pure-Python kernel.
    """
    st = st or OptState()
    for name in st.beta:
        assert name in env, f"index for {name}, which has no definition"
    g, roots = compile_graph(env, [sv] + [SVar(name) for name in st.beta])
    ids = [g.var_id(name) for name in st.beta]
    k = kernels.get_backend("python" if observe is not None else backend)
    return k.opt_check(g, roots[0], ids, list(st.beta.values()), list(st.path), observe)


def path_sum(start: int, path) -> int:
    """Sum of ``path[start:]``, following the recursive definition step by step.

    Drop the first element while the start index is positive; then add
    elements one at a time onto the sum of the rest, with the empty path
    summing to 0.  Written as loops so long paths do not recurse.
    """
    path = list(path)
    if not 0 <= start <= len(path):
        raise ValueError(f"start {start} outside a path of length {len(path)}")
    pos = 0
    while start > 0:  # drop one element, decrease the start
        pos += 1
        start -= 1
    total = 0
    for b in reversed(path[pos:]):  # b1 + sum(b2 ... bn), innermost first
        total = b + total
    return total


def prefix_sums(path) -> list:
    """``[0, p0, p0+p1, ...]``; suffix sums are differences of two entries."""
    return list(accumulate(path, initial=0))


def path_sum_prefix(start: int, path) -> int:
    """Same value as :func:`path_sum`, via prefix sums."""
    sums = prefix_sums(path)
    return sums[-1] - sums[start]


def judge_rules(env: dict, sv, st: OptState | None = None) -> bool:
    """Direct transcription of the rules, recursive, with an explicit tuple path."""
    st = st or OptState()
    return _judge(env, sv, dict(st.beta), tuple(st.path))


def _judge(env, sv, beta, path):
    t = type(sv)
    if t is SVar:
        x = sv.name
        if x not in env:
            return True
        if x in beta:
            return path_sum(beta[x], path) > 0
        beta = dict(beta)
        beta[x] = len(path)
        return _judge(env, env[x], beta, path)
    if t is SCons:
        return _judge(env, sv.tail, beta, path + (1,))
    if t is STail:
        return _judge(env, sv.arg, beta, path + (-1,))
    if t is SPointwise:
        return _judge(env, sv.left, beta, path) and _judge(env, sv.right, beta, path)
    if t is SInterleave:
        return _judge(env, sv.left, beta, path) and _judge(env, sv.right, beta, path + (1,))
    raise TypeError(f"not a stream value: {sv!r}")
