"""Pure-Python kernels; the reference the compiled module must agree with.

All three walk a :class:`~cstream.graph.Graph` with an explicit stack, so
deep environments never touch the interpreter's recursion limit.  Stack
entries ``>= 0`` are node ids to visit; negative entries are markers that
undo a state change once the subtree above them is finished, which keeps
the state path-scoped without copying it.
"""

from .errors import BudgetExceeded, DivergentAccess, EvalError, OpenIndexAccess
from .graph import CONS, IL, NOP, OPS, TAIL, VAR
from .values import apply_numop

_INC, _DEC, _POP = -1, -2, -3  # naive_check markers
_DROP, _PLUS = -1, -2  # opt_check markers; -3 - v unbinds variable v


def naive_check(g, start, init_vars=(), init_counts=(), observe=None):
    """Counter-map well-definedness judgment; O(|map|) work per constructor.

    ``observe(node, counts)`` is called before each node visit with the
    current variable-name -> counter map (testing hook).
    """
    kind, a, b, c = g.kind, g.a, g.b, g.c
    count = [0] * g.nvars
    present = [False] * g.nvars
    visited = []
    for v, k in zip(init_vars, init_counts):
        present[v] = True
        count[v] = k
        visited.append(v)
    stack = [start]
    while stack:
        t = stack.pop()
        if t >= 0:
            if observe is not None:
                observe(t, {g.names[v]: count[v] for v in visited})
            k = kind[t]
            if k == VAR:
                v = c[t]
                if present[v]:
                    if count[v] <= 0:
                        return False
                else:
                    present[v] = True
                    count[v] = 0
                    visited.append(v)
                    stack.append(_POP)
                    stack.append(a[t])
            elif k == CONS:
                for v in visited:
                    count[v] += 1
                stack.append(_DEC)
                stack.append(a[t])
            elif k == TAIL:
                for v in visited:
                    count[v] -= 1
                stack.append(_INC)
                stack.append(a[t])
            elif k == NOP:
                stack.append(b[t])
                stack.append(a[t])
            elif k == IL:
                stack.append(_DEC)
                stack.append(b[t])
                stack.append(_INC)
                stack.append(a[t])
            # FREE: always fine
        elif t == _INC:
            for v in visited:
                count[v] += 1
        elif t == _DEC:
            for v in visited:
                count[v] -= 1
        else:
            present[visited.pop()] = False
    return True


def opt_check(g, start, init_beta_vars=(), init_beta_idx=(), init_path=(), observe=None):
    """Index-map + path judgment; O(1) per node via running prefix sums.

    ``observe(node, beta, path)`` gets variable-name -> index and the
    current path as a list of +1/-1 (testing hook).
    """
    kind, a, b, c = g.kind, g.a, g.b, g.c
    beta = [-1] * g.nvars
    for v, i in zip(init_beta_vars, init_beta_idx):
        beta[v] = i
    prefix = [0]
    for step in init_path:
        prefix.append(prefix[-1] + step)
    plen = len(init_path)
    stack = [start]
    while stack:
        t = stack.pop()
        if t >= 0:
            if observe is not None:
                path = [prefix[j + 1] - prefix[j] for j in range(plen)]
                observe(t, {g.names[v]: beta[v] for v in range(g.nvars) if beta[v] >= 0}, path)
            k = kind[t]
            if k == VAR:
                v = c[t]
                if beta[v] >= 0:
                    if prefix[plen] - prefix[beta[v]] <= 0:
                        return False
                else:
                    beta[v] = plen
                    stack.append(-3 - v)
                    stack.append(a[t])
            elif k == CONS or k == TAIL:
                step = 1 if k == CONS else -1
                plen += 1
                if plen < len(prefix):
                    prefix[plen] = prefix[plen - 1] + step
                else:
                    prefix.append(prefix[plen - 1] + step)
                stack.append(_DROP)
                stack.append(a[t])
            elif k == NOP:
                stack.append(b[t])
                stack.append(a[t])
            elif k == IL:
                stack.append(_DROP)
                stack.append(b[t])
                stack.append(_PLUS)
                stack.append(a[t])
        elif t == _DROP:
            plen -= 1
        elif t == _PLUS:
            plen += 1
            if plen < len(prefix):
                prefix[plen] = prefix[plen - 1] + 1
            else:
                prefix.append(prefix[plen - 1] + 1)
        else:
            beta[-3 - t] = -1
    return True


_MISSING = object()
_BUSY = object()


def index(g, start, indices, budget, stats=None):
    """Elements ``indices`` of the stream at node ``start``.

    Returns ``(values, steps)``.  One (variable, index) table is shared by
    all requested indices; an entry still being computed when it is asked
    for again means the derivation is infinite.  ``stats`` (a Counter)
    receives one count per rule applied.
    """
    kind, a, b, c, heads, names = g.kind, g.a, g.b, g.c, g.heads, g.names
    nv = g.nvars
    memo = {}
    steps = 0
    out = []
    for i in indices:
        try:
            nodes = [start]
            idxs = [i]
            vals = []
            while nodes:
                t = nodes.pop()
                x = idxs.pop()
                if t >= 0:
                    steps += 1
                    if steps > budget:
                        raise BudgetExceeded(budget)
                    k = kind[t]
                    if k == VAR:
                        key = x * nv + c[t]
                        got = memo.get(key, _MISSING)
                        if got is _MISSING:
                            if stats is not None:
                                stats["at-var"] += 1
                            memo[key] = _BUSY
                            nodes.append(-2)
                            idxs.append(key)
                            nodes.append(a[t])
                            idxs.append(x)
                        elif got is _BUSY:
                            raise DivergentAccess(names[c[t]], x)
                        else:
                            vals.append(got)
                    elif k == CONS:
                        if x == 0:
                            if stats is not None:
                                stats["at-cons-0"] += 1
                            vals.append(heads[c[t]])
                        else:
                            if stats is not None:
                                stats["at-cons-succ"] += 1
                            nodes.append(a[t])
                            idxs.append(x - 1)
                    elif k == TAIL:
                        if stats is not None:
                            stats["at-tail"] += 1
                        nodes.append(a[t])
                        idxs.append(x + 1)
                    elif k == NOP:
                        if stats is not None:
                            stats["at-nop"] += 1
                        nodes.append(-1)
                        idxs.append(c[t])
                        nodes.append(b[t])
                        idxs.append(x)
                        nodes.append(a[t])
                        idxs.append(x)
                    elif k == IL:
                        if x % 2 == 0:
                            if stats is not None:
                                stats["at-il-even"] += 1
                            nodes.append(a[t])
                        else:
                            if stats is not None:
                                stats["at-il-odd"] += 1
                            nodes.append(b[t])
                        idxs.append(x // 2)
                    else:
                        raise OpenIndexAccess(names[c[t]], x)
                elif t == -1:
                    r = vals.pop()
                    vals[-1] = apply_numop(OPS[x], vals[-1], r)
                else:
                    memo[x] = vals[-1]
            out.append(vals.pop())
        except EvalError as err:
            err.request = i  # the requested index whose derivation failed
            raise
    return out, steps
