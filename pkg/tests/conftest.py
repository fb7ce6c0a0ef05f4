import functools

import pytest
from hypothesis import HealthCheck, settings

from matchcodes.code import build
from matchcodes.lattice import (
    honeycomb_torus,
    label_matching,
    modified_honeycomb_torus,
    tricolored_honeycomb_torus,
    wen_matching,
)

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def zcode(Lx, Ly):
    lat = honeycomb_torus(Lx, Ly)
    return build(lat, label_matching(lat, "z"))


@functools.lru_cache(maxsize=None)
def wencode(Lx, Ly):
    lat = honeycomb_torus(Lx, Ly)
    return build(lat, wen_matching(lat))


@functools.lru_cache(maxsize=None)
def modcode(Lx, Ly):
    lat = modified_honeycomb_torus(Lx, Ly)
    return build(lat, label_matching(lat, "z"))


@functools.lru_cache(maxsize=None)
def tricolored(Lx, Ly):
    return tricolored_honeycomb_torus(Lx, Ly)


@pytest.fixture
def z44():
    return zcode(4, 4)


@pytest.fixture
def z33():
    return zcode(3, 3)


@pytest.fixture
def wen33():
    return wencode(3, 3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
