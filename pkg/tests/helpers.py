"""Shared test helpers: program loading and hypothesis strategies."""

import functools
from pathlib import Path

from hypothesis import strategies as st

from cstream.evaluator import EvalConfig, run_program
from cstream.runtime import parse_env
from cstream.syntax import parse_program
from cstream.values import SCons, SInterleave, SPointwise, STail, SVar

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


@functools.lru_cache(maxsize=None)
def load(name):
    return parse_program((PROGRAMS / f"{name}.cst").read_text())


def run(name, expr, **config):
    return run_program(load(name), expr, EvalConfig(**config) if config else None)


def env_of(text):
    """``(env, root_value)`` from ``x = value`` lines."""
    c = parse_env(text)
    return c.env, c.root.value


@functools.lru_cache(maxsize=None)
def stream_values(names, max_leaves=6, ops=("+", "-")):
    """Stream values over the variable names in the tuple ``names``."""
    leaves = st.sampled_from([SVar(x) for x in names])
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(SCons, st.integers(0, 3), inner),
            st.builds(STail, inner),
            st.builds(SPointwise, inner, st.sampled_from(ops), inner),
            st.builds(SInterleave, inner, inner),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def envs(draw, max_vars=4, max_leaves=6, free=False):
    """Environments over ``x0 ..``; with ``free``, leaves may also be ``y``."""
    n = draw(st.integers(1, max_vars))
    names = [f"x{i}" for i in range(n)]
    pool = tuple(names) + (("y",) if free else ())
    return {x: draw(stream_values(pool, max_leaves)) for x in names}


# root (first variable) verdicts shared by both checkers
VERDICTS = [
    ("x = 0:x", True),
    ("x = x", False),
    ("x = x^", False),
    ("x = 0:x^", False),
    ("x = 0:1:x^", True),
    ("x = x[+]y\ny = 1:y", False),
    ("x = 0:(x[+]y)\ny = 1:y", True),
    ("x = 0:((x[+]y) || (x[+]y))\ny = 1:y", True),
    ("x = 0:(x || x^^)", False),
    ("x = x || 0:x", False),
    ("x = 0:x || x", True),
    ("x = 1:y\ny = 2:x", True),
    ("x = y\ny = x", False),
    ("x = y", True),  # free variables are accepted
    ("s = (s^ || s) || 0:s", False),
    ("x = z[*]x\nz = 0:z", False),
]
