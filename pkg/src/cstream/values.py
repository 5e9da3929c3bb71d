"""Runtime values: exact numbers, open stream values and tagged values.

Numbers are exact rationals.  Integral results are kept as plain ``int`` and
everything else as :class:`fractions.Fraction`; both compare and hash
exactly, so the choice is invisible to callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero

Rational = Union[int, Fraction]

NUM_OPS = ("+", "-", "*", "/")


def normalize(q) -> Rational:
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


def apply_numop(op: str, a: Rational, b: Rational) -> Rational:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise DivisionByZero(f"{format_num(a)} / 0")
        return normalize(Fraction(a) / Fraction(b))
    raise ValueError(f"unknown numeric operator {op!r}")


def format_num(q: Rational) -> str:
    q = normalize(q)
    if isinstance(q, Fraction):
        return f"{q.numerator}/{q.denominator}"
    return str(q)


def parse_num(text) -> Rational:
    if isinstance(text, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(text, int):
        return text
    return normalize(Fraction(str(text)))


# ---------------------------------------------------------------- stream values


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class SCons:
    head: Rational
    tail: "StreamValue"


@dataclass(frozen=True)
class STail:
    arg: "StreamValue"


@dataclass(frozen=True)
class SPointwise:
    left: "StreamValue"
    op: str
    right: "StreamValue"


@dataclass(frozen=True)
class SInterleave:
    left: "StreamValue"
    right: "StreamValue"


StreamValue = Union[SVar, SCons, STail, SPointwise, SInterleave]


def cons_chain(heads, tail: StreamValue) -> StreamValue:
    """``cons_chain([1, 2], x)`` builds ``1:2:x``."""
    for h in reversed(list(heads)):
        tail = SCons(normalize(Fraction(h)), tail)
    return tail


def stream_vars(sv: StreamValue) -> set:
    """Names of all variables occurring in ``sv``."""
    out = set()
    stack = [sv]
    while stack:
        v = stack.pop()
        if type(v) is SVar:
            out.add(v.name)
        elif type(v) is SCons:
            stack.append(v.tail)
        elif type(v) is STail:
            stack.append(v.arg)
        else:
            stack.append(v.left)
            stack.append(v.right)
    return out


def stream_size(sv: StreamValue) -> int:
    n = 0
    stack = [sv]
    while stack:
        v = stack.pop()
        n += 1
        if type(v) is SCons:
            stack.append(v.tail)
        elif type(v) is STail:
            stack.append(v.arg)
        elif type(v) in (SPointwise, SInterleave):
            stack.append(v.left)
            stack.append(v.right)
    return n


# precedence levels for rendering, loosest first
_IL, _PW, _CONS, _TAIL, _ATOM = 1, 2, 3, 4, 5


def _prec(sv) -> int:
    t = type(sv)
    if t is SVar:
        return _ATOM
    if t is STail:
        return _TAIL
    if t is SCons:
        return _CONS
    if t is SPointwise:
        return _PW
    return _IL


def _show_head(q) -> str:
    text = format_num(q)
    if q < 0 or "/" in text:
        return f"({text})"
    return text


def show_stream(sv: StreamValue, ctx: int = 0) -> str:
    t = type(sv)
    if t is SVar:
        return sv.name
    if t is SCons:
        text = f"{_show_head(sv.head)}:{show_stream(sv.tail, _CONS)}"
    elif t is STail:
        text = f"{show_stream(sv.arg, _TAIL)}^"
    elif t is SPointwise:
        text = f"{show_stream(sv.left, _PW)}[{sv.op}]{show_stream(sv.right, _PW + 1)}"
    else:
        text = f"{show_stream(sv.left, _IL)} || {show_stream(sv.right, _IL + 1)}"
    if _prec(sv) < ctx:
        return f"({text})"
    return text


# ---------------------------------------------------------------- tagged values


@dataclass(frozen=True)
class Num:
    value: Rational

    def __str__(self):
        return format_num(self.value)


@dataclass(frozen=True)
class Bool:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Stream:
    value: StreamValue

    def __str__(self):
        return show_stream(self.value)


Value = Union[Num, Bool, Stream]
