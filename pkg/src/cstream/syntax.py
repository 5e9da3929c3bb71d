"""Abstract syntax, parser and pretty-printer for stream programs.

Surface syntax, loosest binding first::

    if b then e1 else e2
    e1 || e2                    interleave, left-assoc
    e1 [+] e2  ([-] [*] [/])    pointwise, left-assoc, one level
    n1 <= n2  (< == >= >)       comparison, non-assoc
    n : s                       cons, right-assoc
    n1 + n2,  n1 - n2           numeric, left-assoc
    n1 * n2,  n1 / n2           numeric, left-assoc
    s^   s(n)   f(e, ...)       tail, indexing, call
    [e]                         sugar for repeat(e)

``//`` starts a line comment.  A declaration is ``f(x, y) = e``; a nullary
function may also be written ``f = e`` and referenced as a bare name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import ParseError
from .values import Bool, Num, Stream, Value, format_num, show_stream

# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Var:
    name: str
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lit:
    """A value leaf: numeric/boolean literal, or a value put in by substitution."""

    value: Value


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    else_: "Expr"


@dataclass(frozen=True)
class Cons:
    head: "Expr"
    tail: "Expr"


@dataclass(frozen=True)
class Tail:
    arg: "Expr"


@dataclass(frozen=True)
class PointwiseOp:
    left: "Expr"
    op: str
    right: "Expr"


@dataclass(frozen=True)
class Interleave:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fname: str
    args: tuple
    pos: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class At:
    stream: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class BinOp:
    left: "Expr"
    op: str
    right: "Expr"


@dataclass(frozen=True)
class Compare:
    left: "Expr"
    rel: str
    right: "Expr"


Expr = Union[Var, Lit, If, Cons, Tail, PointwiseOp, Interleave, Call, At, BinOp, Compare]

RELATIONS = ("<=", "<", "==", ">=", ">")


@dataclass(frozen=True)
class Decl:
    name: str
    params: tuple
    body: Expr


@dataclass
class Program:
    decls: dict = field(default_factory=dict)

    def arities(self) -> dict:
        return {name: len(d.params) for name, d in self.decls.items()}

    def fbody(self, name):
        d = self.decls[name]
        return d.params, d.body

    def __str__(self):
        return "\n".join(show_decl(d) for d in self.decls.values())


REPEAT = Decl("repeat", ("n",), Cons(Var("n"), Call("repeat", (Var("n"),))))

# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<pwop>\[[-+*/]\])
  | (?P<op>\|\||<=|>=|==|[<>:^(),\[\]=+\-*/])
    """,
    re.VERBOSE,
)

KEYWORDS = {"if", "then", "else", "true", "false"}


@dataclass
class Token:
    kind: str  # num, ident, kw, pwop, op, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident" and m.group() in KEYWORDS:
            tokens.append(Token("kw", m.group(), line, col))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.used_repeat = False

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "eof"

    def take(self, text):
        if not self.at(text) or self.tok.kind in ("ident", "num"):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        self.i += 1

    def accept(self, text):
        if self.at(text) and self.tok.kind not in ("ident", "num"):
            self.i += 1
            return True
        return False

    # -- declarations

    def program(self):
        decls = []
        while self.tok.kind != "eof":
            name_tok = self.tok
            if name_tok.kind != "ident":
                raise self.error(f"expected a declaration, found {name_tok.text!r}")
            self.i += 1
            params = []
            if self.accept("("):
                if not self.at(")"):
                    while True:
                        if self.tok.kind != "ident":
                            raise self.error("expected a parameter name")
                        params.append(self.tok)
                        self.i += 1
                        if not self.accept(","):
                            break
                self.take(")")
            self.take("=")
            body = self.expr()
            decls.append((name_tok, params, body))
        return decls

    # -- expressions

    def expr(self):
        if self.at("if", "kw"):
            self.i += 1
            cond = self.expr()
            if not self.at("then", "kw"):
                raise self.error("expected 'then'")
            self.i += 1
            then = self.expr()
            if not self.at("else", "kw"):
                raise self.error("expected 'else'")
            self.i += 1
            return If(cond, then, self.expr())
        return self.interleave()

    def interleave(self):
        e = self.pointwise()
        while self.accept("||"):
            e = Interleave(e, self.pointwise())
        return e

    def pointwise(self):
        e = self.compare()
        while self.tok.kind == "pwop":
            op = self.tok.text[1]
            self.i += 1
            e = PointwiseOp(e, op, self.compare())
        return e

    def compare(self):
        e = self.cons()
        if self.tok.kind == "op" and self.tok.text in RELATIONS:
            rel = self.tok.text
            self.i += 1
            e = Compare(e, rel, self.cons())
            if self.tok.kind == "op" and self.tok.text in RELATIONS:
                raise self.error("comparisons do not chain")
        return e

    def cons(self):
        head = self.additive()
        if self.accept(":"):
            return Cons(head, self.cons())
        return head

    def additive(self):
        e = self.multiplicative()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            e = BinOp(e, op, self.multiplicative())
        return e

    def multiplicative(self):
        e = self.postfix()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.tok.text
            self.i += 1
            e = BinOp(e, op, self.postfix())
        return e

    def postfix(self):
        e = self.primary()
        while True:
            if self.accept("^"):
                e = Tail(e)
            elif self.at("(", "op"):
                self.i += 1
                args = self.args()
                if len(args) != 1:
                    raise self.error("indexing takes exactly one argument")
                e = At(e, args[0])
            else:
                return e

    def args(self):
        args = []
        if not self.accept(")"):
            while True:
                args.append(self.expr())
                if self.accept(")"):
                    break
                self.take(",")
        return tuple(args)

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Lit(Num(int(t.text)))
        if t.kind == "kw" and t.text in ("true", "false"):
            self.i += 1
            return Lit(Bool(t.text == "true"))
        if t.kind == "kw" and t.text == "if":
            return self.expr()
        if t.kind == "ident":
            self.i += 1
            if self.at("(", "op"):
                self.i += 1
                return Call(t.text, self.args(), pos=(t.line, t.col))
            return Var(t.text, pos=(t.line, t.col))
        if self.accept("("):
            e = self.expr()
            self.take(")")
            return e
        if self.accept("["):
            e = self.expr()
            self.take("]")
            self.used_repeat = True
            return Call("repeat", (e,), pos=(t.line, t.col))
        raise self.error(f"unexpected {t.text or 'end of input'!r}")


# ---------------------------------------------------------------- name resolution


def _resolve(e, params, arities, strict):
    """Turn ``x(i)`` on non-functions into indexing and nullary names into calls.

    ``strict`` (declaration bodies) rejects unknown names; otherwise unknown
    names stay free stream variables.
    """
    r = lambda sub: _resolve(sub, params, arities, strict)  # noqa: E731
    t = type(e)
    if t is Var:
        if e.name in params:
            return e
        if e.name in arities:
            if arities[e.name] != 0:
                raise ParseError(f"function {e.name} used without arguments", *(e.pos or (None, None)))
            return Call(e.name, (), pos=e.pos)
        if strict:
            raise ParseError(f"unknown identifier {e.name}", *(e.pos or (None, None)))
        return e
    if t is Call:
        args = tuple(r(a) for a in e.args)
        if e.fname in params or e.fname not in arities:
            if strict and e.fname not in params:
                raise ParseError(f"unknown function {e.fname}", *(e.pos or (None, None)))
            if len(args) != 1:
                raise ParseError(f"{e.fname} is not a function; indexing takes one argument",
                                 *(e.pos or (None, None)))
            return At(Var(e.fname, pos=e.pos), args[0])
        if arities[e.fname] != len(args):
            raise ParseError(f"{e.fname} expects {arities[e.fname]} argument(s), got {len(args)}",
                             *(e.pos or (None, None)))
        return Call(e.fname, args, pos=e.pos)
    if t is Lit:
        return e
    if t is If:
        return If(r(e.cond), r(e.then), r(e.else_))
    if t is Cons:
        return Cons(r(e.head), r(e.tail))
    if t is Tail:
        return Tail(r(e.arg))
    if t is PointwiseOp:
        return PointwiseOp(r(e.left), e.op, r(e.right))
    if t is Interleave:
        return Interleave(r(e.left), r(e.right))
    if t is At:
        return At(r(e.stream), r(e.index))
    if t is BinOp:
        return BinOp(r(e.left), e.op, r(e.right))
    if t is Compare:
        return Compare(r(e.left), e.rel, r(e.right))
    raise TypeError(f"not an expression: {e!r}")


def parse_program(text: str) -> Program:
    p = _Parser(text)
    raw = p.program()
    arities = {}
    for name_tok, params, _ in raw:
        if name_tok.text in arities:
            raise ParseError(f"duplicate function {name_tok.text}", name_tok.line, name_tok.col)
        names = [t.text for t in params]
        for k, t in enumerate(params):
            if t.text in names[:k]:
                raise ParseError(f"duplicate parameter {t.text}", t.line, t.col)
        arities[name_tok.text] = len(params)
    if p.used_repeat and "repeat" not in arities:
        arities["repeat"] = 1
    prog = Program()
    for name_tok, params, body in raw:
        names = tuple(t.text for t in params)
        prog.decls[name_tok.text] = Decl(name_tok.text, names, _resolve(body, set(names), arities, True))
    if p.used_repeat and "repeat" not in prog.decls:
        prog.decls["repeat"] = REPEAT
    return prog


def parse_expr(text: str, functions=None) -> Expr:
    """Parse one expression.

    ``functions`` maps function names to arities (a :class:`Program` works
    too).  Without it calls and indexing are left as written: ``x(3)`` is a
    call.  With it, ``x(3)`` on a non-function becomes indexing and the
    ``[k]`` sugar requires ``repeat`` to be among the functions.
    """
    p = _Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after expression")
    if functions is None:
        return e
    if isinstance(functions, Program):
        functions = functions.arities()
    arities = dict(functions)
    if p.used_repeat:
        arities.setdefault("repeat", 1)
    return _resolve(e, set(), arities, False)


def uses_call(e, fname) -> bool:
    stack = [e]
    while stack:
        x = stack.pop()
        if type(x) is Call:
            if x.fname == fname:
                return True
            stack.extend(x.args)
        elif type(x) in (Var, Lit):
            continue
        else:
            stack.extend(getattr(x, f) for f in x.__dataclass_fields__ if f not in ("op", "rel", "pos"))
    return False


# ---------------------------------------------------------------- pretty-printer

_IF, _IL, _PW, _CMP, _CONS, _ADD, _MUL, _POST, _ATOM = range(9)


def _level(e) -> int:
    t = type(e)
    if t is If:
        return _IF
    if t is Interleave:
        return _IL
    if t is PointwiseOp:
        return _PW
    if t is Compare:
        return _CMP
    if t is Cons:
        return _CONS
    if t is BinOp:
        return _ADD if e.op in "+-" else _MUL
    if t in (Tail, At):
        return _POST
    if t is Lit and isinstance(e.value, Stream):
        return _ATOM if type(e.value.value).__name__ == "SVar" else _IF
    if t is Lit and isinstance(e.value, Num) and (e.value.value < 0 or "/" in str(e.value)):
        return _IF
    return _ATOM


def show_expr(e, ctx: int = 0) -> str:
    t = type(e)
    if t is Var:
        text = e.name
    elif t is Lit:
        v = e.value
        text = show_stream(v.value) if isinstance(v, Stream) else str(v)
    elif t is If:
        text = f"if {show_expr(e.cond, _IL)} then {show_expr(e.then, _IL)} else {show_expr(e.else_, _IF)}"
    elif t is Cons:
        text = f"{show_expr(e.head, _ADD)}:{show_expr(e.tail, _CONS)}"
    elif t is Tail:
        text = f"{show_expr(e.arg, _POST)}^"
    elif t is PointwiseOp:
        text = f"{show_expr(e.left, _PW)}[{e.op}]{show_expr(e.right, _CMP)}"
    elif t is Interleave:
        text = f"{show_expr(e.left, _IL)} || {show_expr(e.right, _PW)}"
    elif t is Call:
        text = f"{e.fname}({', '.join(show_expr(a) for a in e.args)})"
    elif t is At:
        text = f"{show_expr(e.stream, _POST)}({show_expr(e.index)})"
    elif t is BinOp:
        lvl = _level(e)
        text = f"{show_expr(e.left, lvl)}{e.op}{show_expr(e.right, lvl + 1)}"
    elif t is Compare:
        text = f"{show_expr(e.left, _CONS)} {e.rel} {show_expr(e.right, _CONS)}"
    else:
        raise TypeError(f"not an expression: {e!r}")
    if _level(e) < ctx:
        return f"({text})"
    return text


def show_decl(d: Decl) -> str:
    return f"{d.name}({', '.join(d.params)}) = {show_expr(d.body)}"


__all__ = [
    "At", "BinOp", "Call", "Compare", "Cons", "Decl", "Expr", "If", "Interleave", "Lit",
    "PointwiseOp", "Program", "Tail", "Var", "format_num", "parse_expr", "parse_program",
    "show_decl", "show_expr", "tokenize",
]
