import os
import subprocess
import sys

import pytest
from hypothesis import given, settings

from cstream import kernels, oracle
from cstream.errors import EvalError
from cstream.graph import compile_graph
from cstream.values import SVar

from helpers import envs

compiled = pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="extension not built")


def _index(k, g, root, n):
    try:
        return k.index(g, root, list(range(n)), 20_000, None)
    except EvalError as err:
        return type(err).__name__, getattr(err, "request", None)


def _all(backend, env):
    k = kernels.get_backend(backend)
    g, (root,) = compile_graph(env, [SVar("x0")])
    return k.naive_check(g, root), k.opt_check(g, root), _index(k, g, root, 12)


@compiled
def test_backends_agree_on_small_envs():
    for env, _ in oracle.enumerate_envs(2, 2):
        assert _all("compiled", env) == _all("python", env), env


@compiled
@settings(max_examples=300, deadline=None)
@given(envs(free=True))
def test_backends_agree_on_random_envs(env):
    assert _all("compiled", env) == _all("python", env)


@compiled
def test_initial_states_are_honoured():
    env = {"x0": SVar("x0")}
    for name in ("compiled", "python"):
        k = kernels.get_backend(name)
        g, (root,) = compile_graph(env, [SVar("x0")])
        v = g.var_id("x0")
        assert k.naive_check(g, root, [v], [1]) is True
        assert k.opt_check(g, root, [v], [0], [1]) is True
        assert k.opt_check(g, root, [v], [1], [1]) is False


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("flag, expected", [("1", "python"), ("", None)])
def test_pure_python_switch(flag, expected):
    env = dict(os.environ, CSTREAM_PURE=flag)
    out = subprocess.run([sys.executable, "-c", "from cstream import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    if expected is None:
        expected = "compiled" if "compiled" in kernels.BACKENDS else "python"
    assert out == expected
