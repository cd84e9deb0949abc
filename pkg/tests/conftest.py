import pytest
from hypothesis import HealthCheck, settings

from aisle.polyring import GF, QQ, make_ring

settings.register_profile(
    "aisle",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("aisle")


@pytest.fixture(scope="session")
def Rx():
    return make_ring(QQ, ["x"])


@pytest.fixture(scope="session")
def Rxy():
    return make_ring(QQ, ["x", "y"])


@pytest.fixture(scope="session")
def Rxyz():
    return make_ring(QQ, ["x", "y", "z"])


@pytest.fixture(scope="session")
def axes():
    """Q[x,y]/(xy), the coordinate ring of the two axes."""
    return make_ring(QQ, ["x", "y"], relations=["x*y"])


@pytest.fixture(scope="session")
def F7xyz():
    return make_ring(GF(7), ["x", "y", "z"])


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the full verify suite several times")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
