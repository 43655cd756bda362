from __future__ import annotations

import functools
import sys

import pytest

from coxcluster import context
from coxcluster.ncp_lattice import enumerate_ncp


@functools.lru_cache(maxsize=None)
def ctx_for(name: str):
    return context(name)


@functools.lru_cache(maxsize=None)
def lattice_for(name: str):
    return enumerate_ncp(ctx_for(name))


@pytest.fixture
def a2():
    return ctx_for("A2")


@pytest.fixture
def a3():
    return ctx_for("A3")


@pytest.fixture
def b3():
    return ctx_for("B3")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
