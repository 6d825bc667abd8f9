import os

import pytest
from hypothesis import HealthCheck, settings

from taulab.cayley import build_graph
from taulab.matgroup import sanov
from taulab.reduction import PrimeSite, reduce_generators

settings.register_profile("default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def sanov_gs():
    return sanov()


@pytest.fixture(scope="session")
def sanov_graph(sanov_gs):
    cache = {}

    def get(p):
        if p not in cache:
            site = PrimeSite(p, 0, sanov_gs.field)
            cache[p] = build_graph(reduce_generators(site, sanov_gs))
        return cache[p]

    return get


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
