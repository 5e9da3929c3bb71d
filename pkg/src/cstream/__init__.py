"""Interpreter and well-definedness checkers for a calculus of corecursive streams.

Programs are evaluated to capsules: a root value plus an environment of
stream equations.  Cyclic calls are closed with fresh variables, and every
function result passes a well-definedness check before it is returned.
"""

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    CStreamError,
    DivergentAccess,
    DivisionByZero,
    EvalError,
    IllFormedStream,
    OpenIndexAccess,
    ParseError,
    TypeMismatch,
    UnknownFunction,
)
from .runtime import Capsule, env_union, parse_env, reachable, substitute
from .syntax import Program, parse_expr, parse_program
from .values import Bool, Num, SCons, SInterleave, SPointwise, STail, Stream, SVar

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "Bool",
    "BudgetExceeded",
    "CStreamError",
    "Capsule",
    "DivergentAccess",
    "DivisionByZero",
    "EvalError",
    "IllFormedStream",
    "Num",
    "OpenIndexAccess",
    "ParseError",
    "Program",
    "SCons",
    "SInterleave",
    "SPointwise",
    "STail",
    "SVar",
    "Stream",
    "TypeMismatch",
    "UnknownFunction",
    "env_union",
    "parse_env",
    "parse_expr",
    "parse_program",
    "reachable",
    "substitute",
]
