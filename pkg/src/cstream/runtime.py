"""Environments, call traces, capsules, substitution and fresh names."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import syntax as ast
from .errors import ArityMismatch
from .values import (
    Bool,
    Num,
    SCons,
    SInterleave,
    SPointwise,
    STail,
    Stream,
    SVar,
    format_num,
    parse_num,
    show_stream,
    stream_vars,
)

FRESH_PREFIX = "$"


class EnvOverlap(AssertionError):
    """Two environments being joined bind the same variable (a fresh-name bug)."""


def env_union(a: dict, b: dict) -> dict:
    overlap = a.keys() & b.keys()
    if overlap:
        raise EnvOverlap(f"environments overlap on {sorted(overlap)}")
    out = dict(a)
    out.update(b)
    return out


def env_vars(env: dict) -> set:
    out = set(env)
    for sv in env.values():
        out |= stream_vars(sv)
    return out


def free_vars(env: dict) -> set:
    return env_vars(env) - env.keys()


def is_closed(env: dict) -> bool:
    return not free_vars(env)


def reachable(env: dict, root) -> set:
    """Variables of ``dom(env)`` reachable from the stream value ``root``."""
    seen = set()
    todo = [v for v in stream_vars(root) if v in env]
    while todo:
        v = todo.pop()
        if v in seen:
            continue
        seen.add(v)
        todo.extend(w for w in stream_vars(env[v]) if w in env and w not in seen)
    return seen


class NameGenerator:
    """Hands out ``$0``, ``$1``, ... for one top-level evaluation."""

    def __init__(self):
        self.count = 0

    def fresh(self) -> str:
        name = f"{FRESH_PREFIX}{self.count}"
        self.count += 1
        return name


def fresh_var(gen: NameGenerator) -> str:
    return gen.fresh()


def substitute(body, params, args):
    """Replace every occurrence of ``params`` in ``body`` by the matching value leaf."""
    if len(params) != len(args):
        raise ArityMismatch(f"{len(params)} parameter(s) but {len(args)} argument(s)")
    if not params:
        return body
    table = dict(zip(params, args))
    return _subst(body, table)


def _subst(e, table):
    t = type(e)
    if t is ast.Var:
        v = table.get(e.name)
        return e if v is None else ast.Lit(v)
    if t is ast.Lit:
        return e
    if t is ast.Call:
        return ast.Call(e.fname, tuple(_subst(a, table) for a in e.args), pos=e.pos)
    if t is ast.If:
        return ast.If(_subst(e.cond, table), _subst(e.then, table), _subst(e.else_, table))
    if t is ast.Cons:
        return ast.Cons(_subst(e.head, table), _subst(e.tail, table))
    if t is ast.Tail:
        return ast.Tail(_subst(e.arg, table))
    if t is ast.PointwiseOp:
        return ast.PointwiseOp(_subst(e.left, table), e.op, _subst(e.right, table))
    if t is ast.Interleave:
        return ast.Interleave(_subst(e.left, table), _subst(e.right, table))
    if t is ast.At:
        return ast.At(_subst(e.stream, table), _subst(e.index, table))
    if t is ast.BinOp:
        return ast.BinOp(_subst(e.left, table), e.op, _subst(e.right, table))
    if t is ast.Compare:
        return ast.Compare(_subst(e.left, table), e.rel, _subst(e.right, table))
    raise TypeError(f"not an expression: {e!r}")


def show_call(fname, args) -> str:
    return f"{fname}({', '.join(str(a) for a in args)})"


@dataclass
class Capsule:
    """A result value together with the environment defining its variables."""

    root: object  # Value
    env: dict = field(default_factory=dict)

    def is_closed(self) -> bool:
        names = env_vars(self.env)
        if isinstance(self.root, Stream):
            names |= stream_vars(self.root.value)
        return names <= self.env.keys()

    def __str__(self):
        lines = [str(self.root)]
        lines += [f"  {x} = {show_stream(sv)}" for x, sv in self.env.items()]
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "root": value_to_json(self.root),
            "env": [{"var": x, "val": stream_to_json(sv)} for x, sv in self.env.items()],
        }

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, data) -> "Capsule":
        env = {}
        for entry in data.get("env", []):
            if entry["var"] in env:
                raise ValueError(f"variable {entry['var']} bound twice")
            env[entry["var"]] = stream_from_json(entry["val"])
        return cls(value_from_json(data["root"]), env)

    @classmethod
    def loads(cls, text) -> "Capsule":
        return cls.from_json(json.loads(text))


def match_envs(env1: dict, root1, env2: dict, root2, *, injective: bool = True, start=None):
    """Variable mapping under which ``root1``/``env1`` unfolds like ``root2``/``env2``.

    Bound variables are matched structurally: a variable may be mapped to
    one other variable only, and their definitions must match in turn.
    Free variables must correspond to the same free variable.  With
    ``injective`` the mapping must also be one-to-one, which makes it an
    isomorphism of the parts reachable from the roots; without, it is a
    homomorphism, so several variables may fold onto one shared
    definition.  ``start`` is a mapping the result must extend.  Returns
    the mapping, or ``None`` if there is none.
    """
    fwd = dict(start or {})
    back = {y: x for x, y in fwd.items()}
    todo = [(root1, root2)]
    while todo:
        a, b = todo.pop()
        ta, tb = type(a), type(b)
        if ta is SVar or tb is SVar:
            if ta is not tb:
                return None
            x, y = a.name, b.name
            if (x in env1) != (y in env2):
                return None
            if x not in env1:
                if x != y:
                    return None
                continue
            if x in fwd:
                if fwd[x] != y:
                    return None
                continue
            if injective and back.get(y, x) != x:
                return None
            fwd[x] = y
            back[y] = x
            todo.append((env1[x], env2[y]))
        elif ta is not tb:
            return None
        elif ta is SCons:
            if a.head != b.head:
                return None
            todo.append((a.tail, b.tail))
        elif ta is STail:
            todo.append((a.arg, b.arg))
        else:
            if ta is SPointwise and a.op != b.op:
                return None
            todo.append((a.right, b.right))
            todo.append((a.left, b.left))
    return fwd


def capsules_isomorphic(c1: "Capsule", c2: "Capsule") -> bool:
    """Same root value and same environment up to renaming bound variables."""
    r1, r2 = c1.root, c2.root
    if not (isinstance(r1, Stream) and isinstance(r2, Stream)):
        return r1 == r2 and not c1.env and not c2.env
    if len(c1.env) != len(c2.env):
        return False
    m = match_envs(c1.env, r1.value, c2.env, r2.value)
    return m is not None and _match_rest(c1.env, c2.env, m)


def _match_rest(env1, env2, m) -> bool:
    # pair up bindings unreachable from the root, backtracking over candidates
    rest = [x for x in env1 if x not in m]
    if not rest:
        return True
    used = set(m.values())
    x = rest[0]
    for y in env2:
        if y in used:
            continue
        m2 = match_envs(env1, SVar(x), env2, SVar(y), start=m)
        if m2 is not None and _match_rest(env1, env2, m2):
            return True
    return False


# ---------------------------------------------------------------- JSON encoding


def stream_to_json(sv) -> dict:
    t = type(sv)
    if t is SVar:
        return {"tag": "var", "name": sv.name}
    if t is SCons:
        return {"tag": "cons", "head": format_num(sv.head), "tail": stream_to_json(sv.tail)}
    if t is STail:
        return {"tag": "tail", "arg": stream_to_json(sv.arg)}
    if t is SPointwise:
        return {"tag": "op", "op": sv.op,
                "left": stream_to_json(sv.left), "right": stream_to_json(sv.right)}
    if t is SInterleave:
        return {"tag": "interleave",
                "left": stream_to_json(sv.left), "right": stream_to_json(sv.right)}
    raise TypeError(f"not a stream value: {sv!r}")


def stream_from_json(d):
    tag = d["tag"]
    if tag == "var":
        return SVar(d["name"])
    if tag == "cons":
        return SCons(parse_num(d["head"]), stream_from_json(d["tail"]))
    if tag == "tail":
        return STail(stream_from_json(d["arg"]))
    if tag == "op":
        if d["op"] not in ("+", "-", "*", "/"):
            raise ValueError(f"unknown pointwise operator {d['op']!r}")
        return SPointwise(stream_from_json(d["left"]), d["op"], stream_from_json(d["right"]))
    if tag == "interleave":
        return SInterleave(stream_from_json(d["left"]), stream_from_json(d["right"]))
    raise ValueError(f"unknown stream tag {tag!r}")


def value_to_json(v) -> dict:
    if isinstance(v, Num):
        return {"tag": "num", "value": format_num(v.value)}
    if isinstance(v, Bool):
        return {"tag": "bool", "value": v.value}
    return stream_to_json(v.value)


def value_from_json(d):
    if d["tag"] == "num":
        return Num(parse_num(d["value"]))
    if d["tag"] == "bool":
        return Bool(bool(d["value"]))
    return Stream(stream_from_json(d))


# ---------------------------------------------------------------- text environments


def expr_to_stream(e):
    """Convert a parsed expression such as ``0:(x || x^^)`` to a stream value."""
    from .values import normalize, apply_numop

    def num(n):
        if type(n) is ast.Lit and isinstance(n.value, Num):
            return n.value.value
        if type(n) is ast.BinOp:
            return normalize(apply_numop(n.op, num(n.left), num(n.right)))
        raise ValueError(f"cons heads must be constant numbers, got {ast.show_expr(n)}")

    t = type(e)
    if t is ast.Var:
        return SVar(e.name)
    if t is ast.Cons:
        return SCons(num(e.head), expr_to_stream(e.tail))
    if t is ast.Tail:
        return STail(expr_to_stream(e.arg))
    if t is ast.PointwiseOp:
        return SPointwise(expr_to_stream(e.left), e.op, expr_to_stream(e.right))
    if t is ast.Interleave:
        return SInterleave(expr_to_stream(e.left), expr_to_stream(e.right))
    raise ValueError(f"not a stream value: {ast.show_expr(e)}")


def parse_env(text: str) -> Capsule:
    """Parse ``x = sv`` lines into a capsule rooted at the first variable.

    A line ``root = sv`` whose name is ``root`` sets the root instead of
    binding a variable.
    """
    from .errors import ParseError

    env = {}
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        name, eq, rhs = line.partition("=")
        name = name.strip()
        if not eq or not name.isidentifier():
            raise ParseError("expected 'name = stream value'", lineno, 1)
        try:
            sv = expr_to_stream(ast.parse_expr(rhs))
        except ParseError as err:
            raise ParseError(err.message, lineno, err.column) from None
        except ValueError as err:
            raise ParseError(str(err), lineno, 1) from None
        if name == "root":
            root = sv
            continue
        if name in env:
            raise ParseError(f"variable {name} bound twice", lineno, 1)
        env[name] = sv
        if root is None:
            root = SVar(name)
    if root is None:
        raise ParseError("empty environment", 1, 1)
    return Capsule(Stream(root), env)
