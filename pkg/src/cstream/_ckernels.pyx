# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same algorithms and signatures as ``_pykernels``."""

cimport cython
from libc.stdlib cimport malloc, realloc, free

from .errors import BudgetExceeded, DivergentAccess, EvalError, OpenIndexAccess
from .values import apply_numop

cdef enum:
    K_VAR = 0
    K_FREE = 1
    K_CONS = 2
    K_TAIL = 3
    K_NOP = 4
    K_IL = 5


cdef struct IntStack:
    long long *data
    Py_ssize_t size
    Py_ssize_t cap


cdef int st_init(IntStack *s, Py_ssize_t cap) except -1:
    s.data = <long long *>malloc(cap * sizeof(long long))
    if s.data == NULL:
        raise MemoryError()
    s.size = 0
    s.cap = cap
    return 0


cdef inline int st_push(IntStack *s, long long v) except -1:
    cdef long long *grown
    if s.size == s.cap:
        grown = <long long *>realloc(s.data, 2 * s.cap * sizeof(long long))
        if grown == NULL:
            raise MemoryError()
        s.data = grown
        s.cap *= 2
    s.data[s.size] = v
    s.size += 1
    return 0


cdef inline long long st_pop(IntStack *s):
    s.size -= 1
    return s.data[s.size]


def naive_check(g, Py_ssize_t start, init_vars=(), init_counts=(), observe=None):
    if observe is not None:
        from ._pykernels import naive_check as ref
        return ref(g, start, init_vars, init_counts, observe)
    cdef const int[:] kind = g.kind
    cdef const int[:] a = g.a
    cdef const int[:] b = g.b
    cdef const int[:] c = g.c
    cdef Py_ssize_t nv = g.nvars
    cdef long long t, v
    cdef Py_ssize_t j
    cdef int k
    cdef bint ok = True
    cdef long long *count = <long long *>malloc((nv + 1) * sizeof(long long))
    cdef char *present = <char *>malloc(nv + 1)
    cdef long long *visited = <long long *>malloc((nv + 1) * sizeof(long long))
    cdef Py_ssize_t nvisited = 0
    cdef IntStack stack
    if count == NULL or present == NULL or visited == NULL:
        free(count); free(present); free(visited)
        raise MemoryError()
    st_init(&stack, 64)
    try:
        for j in range(nv):
            present[j] = 0
            count[j] = 0
        for v, t in zip(init_vars, init_counts):
            present[v] = 1
            count[v] = t
            visited[nvisited] = v
            nvisited += 1
        st_push(&stack, start)
        while stack.size > 0:
            t = st_pop(&stack)
            if t >= 0:
                k = kind[t]
                if k == K_VAR:
                    v = c[t]
                    if present[v]:
                        if count[v] <= 0:
                            ok = False
                            break
                    else:
                        present[v] = 1
                        count[v] = 0
                        visited[nvisited] = v
                        nvisited += 1
                        st_push(&stack, -3)
                        st_push(&stack, a[t])
                elif k == K_CONS:
                    for j in range(nvisited):
                        count[visited[j]] += 1
                    st_push(&stack, -2)
                    st_push(&stack, a[t])
                elif k == K_TAIL:
                    for j in range(nvisited):
                        count[visited[j]] -= 1
                    st_push(&stack, -1)
                    st_push(&stack, a[t])
                elif k == K_NOP:
                    st_push(&stack, b[t])
                    st_push(&stack, a[t])
                elif k == K_IL:
                    st_push(&stack, -2)
                    st_push(&stack, b[t])
                    st_push(&stack, -1)
                    st_push(&stack, a[t])
            elif t == -1:
                for j in range(nvisited):
                    count[visited[j]] += 1
            elif t == -2:
                for j in range(nvisited):
                    count[visited[j]] -= 1
            else:
                nvisited -= 1
                present[visited[nvisited]] = 0
    finally:
        free(count)
        free(present)
        free(visited)
        free(stack.data)
    return ok


def opt_check(g, Py_ssize_t start, init_beta_vars=(), init_beta_idx=(), init_path=(),
              observe=None):
    if observe is not None:
        from ._pykernels import opt_check as ref
        return ref(g, start, init_beta_vars, init_beta_idx, init_path, observe)
    cdef const int[:] kind = g.kind
    cdef const int[:] a = g.a
    cdef const int[:] b = g.b
    cdef const int[:] c = g.c
    cdef Py_ssize_t nv = g.nvars
    cdef long long t, v
    cdef Py_ssize_t j
    cdef int k
    cdef bint ok = True
    cdef long long *beta = <long long *>malloc((nv + 1) * sizeof(long long))
    cdef IntStack prefix
    cdef IntStack stack
    cdef Py_ssize_t plen
    if beta == NULL:
        raise MemoryError()
    st_init(&prefix, 64)
    st_init(&stack, 64)
    try:
        for j in range(nv):
            beta[j] = -1
        for v, t in zip(init_beta_vars, init_beta_idx):
            beta[v] = t
        st_push(&prefix, 0)
        for t in init_path:
            st_push(&prefix, prefix.data[prefix.size - 1] + t)
        plen = prefix.size - 1
        st_push(&stack, start)
        while stack.size > 0:
            t = st_pop(&stack)
            if t >= 0:
                k = kind[t]
                if k == K_VAR:
                    v = c[t]
                    if beta[v] >= 0:
                        if prefix.data[plen] - prefix.data[beta[v]] <= 0:
                            ok = False
                            break
                    else:
                        beta[v] = plen
                        st_push(&stack, -3 - v)
                        st_push(&stack, a[t])
                elif k == K_CONS or k == K_TAIL:
                    prefix.size = plen + 1
                    st_push(&prefix, prefix.data[plen] + (1 if k == K_CONS else -1))
                    plen += 1
                    st_push(&stack, -1)
                    st_push(&stack, a[t])
                elif k == K_NOP:
                    st_push(&stack, b[t])
                    st_push(&stack, a[t])
                elif k == K_IL:
                    st_push(&stack, -1)
                    st_push(&stack, b[t])
                    st_push(&stack, -2)
                    st_push(&stack, a[t])
            elif t == -1:
                plen -= 1
            elif t == -2:
                prefix.size = plen + 1
                st_push(&prefix, prefix.data[plen] + 1)
                plen += 1
            else:
                beta[-3 - t] = -1
    finally:
        free(beta)
        free(prefix.data)
        free(stack.data)
    return ok


_MISSING = object()
_BUSY = object()


@cython.wraparound(True)
def index(g, Py_ssize_t start, indices, long long budget, stats=None):
    if stats is not None:
        from ._pykernels import index as ref
        return ref(g, start, indices, budget, stats)
    cdef const int[:] kind = g.kind
    cdef const int[:] a = g.a
    cdef const int[:] b = g.b
    cdef const int[:] c = g.c
    cdef list heads = g.heads
    cdef list names = g.names
    cdef long long nv = g.nvars
    cdef dict memo = {}
    cdef long long steps = 0
    cdef long long t, x, key
    cdef int k
    cdef list out = []
    cdef list vals
    cdef object got, r
    cdef IntStack nodes
    cdef IntStack idxs
    st_init(&nodes, 64)
    st_init(&idxs, 64)
    try:
        for i in indices:
            try:
                nodes.size = 0
                idxs.size = 0
                st_push(&nodes, start)
                st_push(&idxs, i)
                vals = []
                while nodes.size > 0:
                    t = st_pop(&nodes)
                    x = st_pop(&idxs)
                    if t >= 0:
                        steps += 1
                        if steps > budget:
                            raise BudgetExceeded(budget)
                        k = kind[t]
                        if k == K_VAR:
                            key = x * nv + c[t]
                            got = memo.get(key, _MISSING)
                            if got is _MISSING:
                                memo[key] = _BUSY
                                st_push(&nodes, -2)
                                st_push(&idxs, key)
                                st_push(&nodes, a[t])
                                st_push(&idxs, x)
                            elif got is _BUSY:
                                raise DivergentAccess(names[c[t]], x)
                            else:
                                vals.append(got)
                        elif k == K_CONS:
                            if x == 0:
                                vals.append(heads[c[t]])
                            else:
                                st_push(&nodes, a[t])
                                st_push(&idxs, x - 1)
                        elif k == K_TAIL:
                            st_push(&nodes, a[t])
                            st_push(&idxs, x + 1)
                        elif k == K_NOP:
                            st_push(&nodes, -1)
                            st_push(&idxs, c[t])
                            st_push(&nodes, b[t])
                            st_push(&idxs, x)
                            st_push(&nodes, a[t])
                            st_push(&idxs, x)
                        elif k == K_IL:
                            st_push(&nodes, a[t] if x % 2 == 0 else b[t])
                            st_push(&idxs, x // 2)
                        else:
                            raise OpenIndexAccess(names[c[t]], x)
                    elif t == -1:
                        r = vals.pop()
                        if x == 0:
                            vals[-1] = vals[-1] + r
                        elif x == 1:
                            vals[-1] = vals[-1] - r
                        elif x == 2:
                            vals[-1] = vals[-1] * r
                        else:
                            vals[-1] = apply_numop("/", vals[-1], r)
                    else:
                        memo[x] = vals[-1]
                out.append(vals.pop())
            except EvalError as err:
                err.request = i  # the requested index whose derivation failed
                raise
    finally:
        free(nodes.data)
        free(idxs.data)
    return out, steps
