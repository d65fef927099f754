import functools

import pytest

from dominion.designs import affine_plane, complement, cyclic_design, projective_plane


@functools.lru_cache(maxsize=None)
def pg(q):
    return projective_plane(q)


@functools.lru_cache(maxsize=None)
def ag(q):
    return affine_plane(q)


@functools.lru_cache(maxsize=None)
def fano():
    return cyclic_design(7, [[0, 1, 3]])


@functools.lru_cache(maxsize=None)
def biplane7():
    return complement(fano())


@functools.lru_cache(maxsize=None)
def paley():
    return cyclic_design(11, [[1, 3, 4, 5, 9]])


@functools.lru_cache(maxsize=None)
def sts13():
    return cyclic_design(13, [[0, 1, 4], [0, 2, 7]])


@functools.lru_cache(maxsize=None)
def sts15():
    return cyclic_design(15, [[0, 1, 4], [0, 2, 8], [0, 5, 10]])


@pytest.fixture
def designs():
    return {
        "pg": pg,
        "ag": ag,
        "fano": fano(),
        "biplane7": biplane7(),
        "paley": paley(),
        "sts13": sts13(),
        "sts15": sts15(),
    }


# --- acceptance reporting: one PASS/FAIL line per criterion -----------------

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, text = marker.args
        _criteria.append((number, item.name, rep.outcome, text))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, outcome, text in sorted(_criteria, key=lambda c: (c[0], c[1])):
        flag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{flag}] criterion {number:2d}  {name}: {text}")
