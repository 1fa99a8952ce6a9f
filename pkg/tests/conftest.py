import functools

import pytest

from finspan import catalog
from finspan.indexings import downset_indexing, subset_indexing


@functools.lru_cache(maxsize=None)
def decomposition(name):
    return catalog.decomposition(name)


@functools.lru_cache(maxsize=None)
def builtin(name):
    return catalog.builtin_category(name)


@functools.lru_cache(maxsize=None)
def subsets(name):
    return subset_indexing(decomposition(name).C)


@functools.lru_cache(maxsize=None)
def downsets(name):
    return downset_indexing(decomposition(name).C)


@pytest.fixture(scope="session")
def div12():
    return decomposition("div12-all")


@pytest.fixture(scope="session")
def finset3():
    return decomposition("finset3-inj")


@pytest.fixture(scope="session")
def finset2():
    return decomposition("finset2-inj")


# acceptance lines, printed once per criterion at the end of the session
ACCEPTANCE = {}


def record(number, part, ok):
    ACCEPTANCE.setdefault(number, []).append((part, ok))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p for _, p in parts)
        detail = ", ".join(f"{name} {'pass' if p else 'FAIL'}" for name, p in parts)
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  ({detail})")
