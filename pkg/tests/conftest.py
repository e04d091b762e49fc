import numpy as np
import pytest

from z2systole import generators as gen


@pytest.fixture(scope="session")
def torus7():
    return gen.torus7()


@pytest.fixture(scope="session")
def rp2():
    return gen.rp2_minimal()


@pytest.fixture(scope="session")
def t4():
    return gen.grid_torus(4)


@pytest.fixture(scope="session")
def hexagon():
    return gen.cycle_graph(6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance report: one line per criterion -------------------------------------------------

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    props = dict(item.user_properties)
    verdict = props.get("verdict", "PASS" if rep.passed else "FAIL")
    detail = props.get("detail", "" if rep.passed else "see traceback")
    line = f"criterion {number:>2} {verdict}: {title}" + (f" ({detail})" if detail else "")
    item.config.stash[_ACCEPTANCE].append((number, line))


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
