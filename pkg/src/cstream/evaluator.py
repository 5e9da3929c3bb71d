"""Big-step evaluation ``e, env, trace => v, env'`` with cycle detection.

Function calls are memoized along the current derivation path in the call
trace.  A call met again while its own body is still being evaluated
evaluates to the fresh variable standing for its result.  A call met for
the first time evaluates its body.  Its variable is then bound to the result,
provided the well-definedness check accepts the extended environment.

Environments are never mutated: every rule returns a new dict or the one it
received.
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field

from . import indexer
from ._deep import run_deep
from . import syntax as ast
from .errors import (
    BudgetExceeded,
    EvalError,
    IllFormedStream,
    TypeMismatch,
    UnknownFunction,
)
from .runtime import Capsule, NameGenerator, env_union, show_call, substitute
from .syntax import REPEAT, Program
from .values import Bool, Num, SCons, SInterleave, SPointwise, STail, Stream, SVar, apply_numop, show_stream
from .wd_naive import wd_gate
from .wd_optimized import owd_gate

CHECKERS = ("naive", "optimized", "off")
MAX_CALL_DEPTH = 100_000

# rules of the evaluation judgment, in the order they are usually introduced
EVAL_RULES = ("val", "if-t", "if-f", "cons", "tail", "op", "args", "invk", "corec", "at")
INDEX_RULES = ("at-var", "at-cons-0", "at-cons-succ", "at-tail", "at-nop", "at-il-even", "at-il-odd")


@dataclass
class EvalConfig:
    budget: int = field(default_factory=indexer.default_budget)
    checker: str = "optimized"
    trace_derivation: bool = False
    log: object = None  # stream for the derivation log; stderr when None

    def __post_init__(self):
        if self.checker not in CHECKERS:
            raise ValueError(f"checker must be one of {CHECKERS}, got {self.checker!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")


class Budget:
    """Step counter shared by evaluation and indexing in one top-level run."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.limit - self.used

    def charge(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(self.limit)


@dataclass
class Outcome:
    """Either a capsule or the error that stopped evaluation."""

    capsule: Capsule | None = None
    error: EvalError | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


class Evaluator:
    def __init__(self, program: Program, config: EvalConfig | None = None, *,
                 gen: NameGenerator | None = None, budget: Budget | None = None,
                 coverage: Counter | None = None):
        self.program = program
        self.config = config or EvalConfig()
        self.gen = gen or NameGenerator()
        self.budget = budget or Budget(self.config.budget)
        self.coverage = coverage
        self.calls = []  # pending calls, outermost first, for diagnostics
        self.depth = 0
        if self.config.checker == "naive":
            self.gate = wd_gate
        elif self.config.checker == "optimized":
            self.gate = owd_gate
        else:
            self.gate = None
        self.log = None
        if self.config.trace_derivation:
            self.log = self.config.log or sys.stderr

    # -------------------------------------------------------------- bookkeeping

    def _rule(self, name, e):
        self.budget.charge()
        if self.coverage is not None:
            self.coverage[name] += 1
        if self.log is not None:
            print(f"{'  ' * self.depth}{name}: {ast.show_expr(e)}", file=self.log)

    # -------------------------------------------------------------- judgment

    def eval(self, e, env: dict, trace: dict):
        """Evaluate ``e``; returns ``(value, env')``.

        ``trace`` maps evaluated calls ``(fname, args)`` to variables.  It is
        updated in place on entry to a call and restored on exit, so each
        call sees exactly the calls pending on its own derivation path.
        """
        t = type(e)
        if t is ast.Lit:
            self._rule("val", e)
            return e.value, env
        if t is ast.Var:
            # only free stream variables of a top-level expression get here
            self._rule("val", e)
            return Stream(SVar(e.name)), env
        if t is ast.Cons:
            self._rule("cons", e)
            self.depth += 1
            head = self.eval_num(e.head, env, trace)
            tail, env1 = self.eval_stream(e.tail, env, trace)
            self.depth -= 1
            return Stream(SCons(head, tail)), env1
        if t is ast.Tail:
            self._rule("tail", e)
            self.depth += 1
            arg, env1 = self.eval_stream(e.arg, env, trace)
            self.depth -= 1
            return Stream(STail(arg)), env1
        if t is ast.PointwiseOp or t is ast.Interleave:
            self._rule("op", e)
            self.depth += 1
            left, env1 = self.eval_stream(e.left, env, trace)
            right, env2 = self.eval_stream(e.right, env, trace)
            self.depth -= 1
            joined = join_envs(env, [env1, env2])
            if t is ast.PointwiseOp:
                return Stream(SPointwise(left, e.op, right)), joined
            return Stream(SInterleave(left, right)), joined
        if t is ast.If:
            self.depth += 1
            cond = self.eval_bool(e.cond, env, trace)
            self.depth -= 1
            self._rule("if-t" if cond else "if-f", e)
            self.depth += 1
            result = self.eval_stream(e.then if cond else e.else_, env, trace)
            self.depth -= 1
            return Stream(result[0]), result[1]
        if t is ast.Call:
            return self.eval_call(e, env, trace)
        if t is ast.At:
            self._rule("at", e)
            self.depth += 1
            sv, env1 = self.eval_stream(e.stream, env, trace)
            i = self.eval_num(e.index, env, trace)
            self.depth -= 1
            if type(i) is not int or i < 0:
                raise TypeMismatch(f"stream index must be a natural number, got {i}")
            return Num(self.index(env1, sv, i)), env
        if t is ast.BinOp:
            self.budget.charge()
            return Num(apply_numop(e.op, self.eval_num(e.left, env, trace),
                                   self.eval_num(e.right, env, trace))), env
        if t is ast.Compare:
            self.budget.charge()
            a = self.eval_num(e.left, env, trace)
            b = self.eval_num(e.right, env, trace)
            return Bool(_compare(a, e.rel, b)), env
        raise TypeError(f"not an expression: {e!r}")

    def eval_stream(self, e, env, trace):
        v, env1 = self.eval(e, env, trace)
        if not isinstance(v, Stream):
            raise TypeMismatch(f"expected a stream, got {v} from {ast.show_expr(e)}")
        return v.value, env1

    def eval_num(self, e, env, trace):
        # numeric expressions never extend the environment
        v, _ = self.eval(e, env, trace)
        if not isinstance(v, Num):
            raise TypeMismatch(f"expected a number, got {v} from {ast.show_expr(e)}")
        return v.value

    def eval_bool(self, e, env, trace):
        v, _ = self.eval(e, env, trace)
        if not isinstance(v, Bool):
            raise TypeMismatch(f"expected a boolean, got {v} from {ast.show_expr(e)}")
        return v.value

    def eval_call(self, e, env, trace):
        if e.fname not in self.program.decls:
            raise UnknownFunction(f"no function named {e.fname}")
        if not all(type(a) is ast.Lit for a in e.args):
            # evaluate the arguments left to right, then the evaluated call
            self._rule("args", e)
            self.depth += 1
            values, envs = [], []
            for a in e.args:
                v, env_a = self.eval(a, env, trace)
                values.append(v)
                envs.append(env_a)
            joined = join_envs(env, envs)
            result = self.eval_call(ast.Call(e.fname, tuple(ast.Lit(v) for v in values), pos=e.pos),
                                    joined, trace)
            self.depth -= 1
            return result
        args = tuple(a.value for a in e.args)
        key = (e.fname, args)
        x = trace.get(key)
        if x is not None:
            self._rule("corec", e)
            return Stream(SVar(x)), env
        self._rule("invk", e)
        if len(self.calls) >= MAX_CALL_DEPTH:
            raise BudgetExceeded(MAX_CALL_DEPTH, "nested calls")
        params, body = self.program.fbody(e.fname)
        x = self.gen.fresh()
        self.calls.append(show_call(e.fname, args))
        trace[key] = x
        self.depth += 1
        try:
            sv, env1 = self.eval_stream(substitute(body, params, args), env, trace)
            if self.gate is not None and not self.gate(env1, x, sv):
                raise IllFormedStream(x, sv)
        except EvalError as err:
            if not err.chain:
                err.chain = tuple(self.calls)
            raise
        finally:
            self.depth -= 1
            del trace[key]
            self.calls.pop()
        out = dict(env1)
        out[x] = sv
        if self.log is not None:
            print(f"{'  ' * self.depth}=> {x} = {show_stream(sv)}", file=self.log)
        return Stream(SVar(x)), out

    def index(self, env, sv, i):
        stats = Counter() if self.coverage is not None else None
        try:
            values, steps = indexer.index_many(env, sv, [i], self.budget.remaining, stats=stats)
        except BudgetExceeded:
            raise BudgetExceeded(self.budget.limit) from None
        finally:
            if stats:
                self.coverage.update(stats)
        self.budget.charge(steps)
        return values[0]


def join_envs(base: dict, results) -> dict:
    """Union of branch results that each extended ``base``.

    Each branch starts from ``base`` and may only add fresh bindings, so the
    union is ``base`` plus every branch's additions.  The additions must be
    pairwise disjoint; a clash means fresh names were reused.
    """
    out = base
    for r in results:
        if r is base:
            continue
        added = {k: v for k, v in r.items() if k not in base}
        out = env_union(out, added)
    return out


def _compare(a, rel, b) -> bool:
    if rel == "<=":
        return a <= b
    if rel == "<":
        return a < b
    if rel == "==":
        return a == b
    if rel == ">=":
        return a >= b
    if rel == ">":
        return a > b
    raise ValueError(f"unknown relation {rel!r}")


def _with_repeat(program: Program, e) -> Program:
    if "repeat" in program.decls or not ast.uses_call(e, "repeat"):
        return program
    decls = dict(program.decls)
    decls["repeat"] = REPEAT
    return Program(decls)


def run_program(program: Program, main_expr, config: EvalConfig | None = None, *,
                coverage: Counter | None = None) -> Capsule:
    """Evaluate ``main_expr`` with a fresh name generator, empty env and trace.

    ``main_expr`` is an expression or its source text.  ``repeat`` is
    supplied when the expression uses the ``[k]`` sugar and the program
    does not declare it.  Raises :class:`EvalError` on failure.
    """
    config = config or EvalConfig()
    if isinstance(main_expr, str):
        main_expr = ast.parse_expr(main_expr, program)
    program = _with_repeat(program, main_expr)

    def go():
        ev = Evaluator(program, config, coverage=coverage)
        value, env = ev.eval(main_expr, {}, {})
        return Capsule(value, env)

    return run_deep(go)


def evaluate(program: Program, main_expr, config: EvalConfig | None = None) -> Outcome:
    """:func:`run_program`, with the error returned instead of raised."""
    try:
        return Outcome(capsule=run_program(program, main_expr, config))
    except EvalError as err:
        return Outcome(error=err)
