import pytest
from hypothesis import given, settings

from cstream.values import SCons, SVar
from cstream.wd_naive import judge_rules, judge_with_delay, wd_gate, wd_judge

from helpers import VERDICTS, env_of, envs


@pytest.mark.parametrize("text, expected", VERDICTS)
@pytest.mark.parametrize("backend", ["python", None])
def test_verdicts(text, expected, backend):
    env, root = env_of(text)
    assert wd_judge(env, root, backend=backend) is expected
    assert judge_rules(env, root) is expected


def test_gate():
    assert wd_gate({}, "x", SCons(0, SVar("x")))
    assert not wd_gate({}, "x", SVar("x"))
    with pytest.raises(ValueError):
        wd_gate({"x": SVar("y")}, "x", SVar("x"))


def test_initial_counters():
    env, _ = env_of("x = x^\ny = 0:x")
    # x already visited with counter 2 on the path: one tail leaves 1 > 0
    assert wd_judge(env, env["x"], {"x": 2})
    assert not wd_judge(env, env["x"], {"x": 1})
    with pytest.raises(AssertionError):
        wd_judge(env, SVar("x"), {"nope": 1})


def test_counters_seen_by_observer():
    env, root = env_of("x = 0:1:x^")
    seen = []
    wd_judge(env, root, observe=lambda node, counts: seen.append(dict(counts)))
    assert seen == [{}, {"x": 0}, {"x": 1}, {"x": 2}, {"x": 1}]


def test_counters_are_path_scoped():
    # the second operand must not see the counter left by the first one
    env, root = env_of("x = 0:(y[+]y)\ny = 0:(z || z^)\nz = 0:x")
    assert wd_judge(env, root)
    assert judge_rules(env, root)


@settings(max_examples=300, deadline=None)
@given(envs(free=True))
def test_kernel_matches_rules(env):
    root = SVar("x0")
    assert wd_judge(env, root) == judge_rules(env, root) == wd_judge(env, root, backend="python")


@settings(max_examples=300, deadline=None)
@given(envs(max_vars=3, free=True))
def test_re_entering_never_changes_the_verdict(env):
    root = SVar("x0")
    plain = wd_judge(env, root)
    for delays in (1, 2):
        assert judge_with_delay(env, root, max_delays=delays) == plain
