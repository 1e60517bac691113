import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lmopuc.corpus import angelesco_atoms_system, lebesgue_system, szego_corpus_system

_RESULTS = pytest.StashKey[dict]()

settings.register_profile("default", max_examples=40, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def leb():
    return lebesgue_system()


@pytest.fixture(scope="session")
def ang2():
    """Two-arc atoms-only Angelesco system, enough atoms for |n| <= 6."""
    return angelesco_atoms_system(np.random.default_rng(7), r=2, atoms=(10, 20))


@pytest.fixture(scope="session")
def ang3():
    return angelesco_atoms_system(np.random.default_rng(11), r=3, atoms=(10, 20))


@pytest.fixture(scope="session")
def szego2():
    return szego_corpus_system(np.random.default_rng(5), r=2)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    detail = dict(item.user_properties).get("summary", "")
    ok = call.excinfo is None
    item.config.stash.setdefault(_RESULTS, {})[marker.args[0]] = (ok, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
