import pytest

from hypalg.geometry import config_alpha_beta, lift_config
from hypalg.relations import relation_lattice

EXAMPLE1_B = [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0),
              (0, 0, 0, 0, 1), (9, 1, -5, -3, -2), (0, 0, 0, 0, 0)]
EXAMPLE1_U0 = (2, 1, -1, 0, 0, 3)


@pytest.fixture(scope="session")
def example1():
    return lift_config(EXAMPLE1_B)


@pytest.fixture(scope="session")
def example1_L(example1):
    return relation_lattice(example1)


@pytest.fixture(scope="session")
def cfg211():
    return config_alpha_beta((2,), (1, 1))


ACCEPTANCE_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    n = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        ACCEPTANCE_RESULTS[n] = ACCEPTANCE_RESULTS.get(n, True) and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ACCEPTANCE_RESULTS[n] else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {verdict}")
