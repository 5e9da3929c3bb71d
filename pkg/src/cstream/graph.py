"""Flat integer encoding of an environment, consumed by the kernels.

Every variable gets exactly one node (shared by all its occurrences); a
bound variable's node points at the root node of its definition, so cyclic
environments become cyclic graphs with finite size.

Per node ``n``:

=========  ============  ============  ================================
kind[n]    a[n]          b[n]          c[n]
=========  ============  ============  ================================
VAR        definition    -             variable id
FREE       -             -             variable id
CONS       tail          -             index into ``heads``
TAIL       argument      -             -
NOP        left          right         operator code (+ - * /)
IL         left          right         -
=========  ============  ============  ================================
"""

from __future__ import annotations

from array import array

from .values import SCons, SInterleave, SPointwise, STail, SVar

VAR, FREE, CONS, TAIL, NOP, IL = range(6)
OP_CODES = {"+": 0, "-": 1, "*": 2, "/": 3}
OPS = "+-*/"


class Graph:
    __slots__ = ("kind", "a", "b", "c", "heads", "names", "var_ids", "bound", "var_nodes")

    def __init__(self):
        self.kind = array("i")
        self.a = array("i")
        self.b = array("i")
        self.c = array("i")
        self.heads = []
        self.names = []  # variable id -> name
        self.var_ids = {}  # name -> variable id
        self.bound = []  # variable id -> bool
        self.var_nodes = []  # variable id -> node id

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.kind)

    def _new(self, kind, a=-1, b=-1, c=-1) -> int:
        self.kind.append(kind)
        self.a.append(a)
        self.b.append(b)
        self.c.append(c)
        return len(self.kind) - 1

    def var_node(self, name) -> int:
        return self.var_nodes[self.var_ids[name]]

    def var_id(self, name) -> int:
        return self.var_ids[name]


def compile_graph(env: dict, roots) -> tuple:
    """Encode the part of ``env`` reachable from ``roots``.

    ``roots`` are stream values; returns ``(graph, root_node_ids)``.
    Variables are numbered in order of first reach, which keeps the encoding
    deterministic.
    """
    g = Graph()
    var_nodes = g.var_nodes
    pending = []  # (stream value, node id) whose node still needs filling

    def node_for(sv) -> int:
        if type(sv) is SVar:
            vid = g.var_ids.get(sv.name)
            if vid is not None:
                return var_nodes[vid]
            vid = len(g.names)
            g.names.append(sv.name)
            g.var_ids[sv.name] = vid
            if sv.name in env:
                n = g._new(VAR, c=vid)
                g.bound.append(True)
                pending.append((env[sv.name], -1 - n))
            else:
                n = g._new(FREE, c=vid)
                g.bound.append(False)
            var_nodes.append(n)
            return n
        n = g._new(-1)
        pending.append((sv, n))
        return n

    out = [node_for(r) for r in roots]
    while pending:
        sv, n = pending.pop()
        if n < 0:
            # definition of the variable whose node is -1 - n
            g.a[-1 - n] = node_for(sv)
            continue
        t = type(sv)
        if t is SCons:
            g.kind[n] = CONS
            g.c[n] = len(g.heads)
            g.heads.append(sv.head)
            g.a[n] = node_for(sv.tail)
        elif t is STail:
            g.kind[n] = TAIL
            g.a[n] = node_for(sv.arg)
        elif t is SPointwise:
            g.kind[n] = NOP
            g.c[n] = OP_CODES[sv.op]
            g.a[n] = node_for(sv.left)
            g.b[n] = node_for(sv.right)
        elif t is SInterleave:
            g.kind[n] = IL
            g.a[n] = node_for(sv.left)
            g.b[n] = node_for(sv.right)
        else:
            raise TypeError(f"not a stream value: {sv!r}")
    return g, out
