"""One test per acceptance criterion; each prints its PASS/FAIL line."""

import pytest

from ltlab.acceptance import CRITERIA, Env, run_criterion


@pytest.fixture(scope="module")
def env():
    return Env(quick=False)


@pytest.mark.parametrize("number, title, suite", CRITERIA, ids=[f"{n:02d}-{t.replace(' ', '_')}" for n, t, _ in CRITERIA])
def test_criterion(env, capsys, number, title, suite):
    outcome = run_criterion(number, env, title, suite)
    with capsys.disabled():
        print("\n" + outcome.line())
        for failure in outcome.failures[:10]:
            print(f"    {failure}")
    assert outcome.passed, outcome.failures[:10]
