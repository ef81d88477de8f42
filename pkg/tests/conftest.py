import pytest

from endocab import cycleset as cs
from endocab import search


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False,
                     help="run the long n=16 search")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="extended run; pass --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def x419():
    return cs.x4_19()


@pytest.fixture(scope="session")
def corpus():
    """Every cycle set of size <= 4 up to isomorphism."""
    return search.small_corpus(4)


CRITERIA = {
    1: "fixture X_4_19 invariants",
    2: "unique irretractable full-cycle cycle set of size 4",
    3: "no irretractable full-cycle cycle set of size 8",
    4: "appendix model v=4 is UNSAT (extended)",
    5: "full-cycle odd prime powers 3, 5, 9 have finite mpl",
    6: "endocabling identity suite over the corpus",
    7: "brace axioms and structural facts",
    8: "B_k structure and central involutions",
    9: "holomorph fixed-point-free oracles",
    10: "pi-type of irreducible corpus members",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k = mark.args[0]
    status = item.config._criteria.get(k)
    if rep.skipped:
        item.config._criteria[k] = status or "NOT-RUN"
    elif rep.failed:
        item.config._criteria[k] = "FAIL"
    elif rep.when == "call" and status is None:
        item.config._criteria[k] = "PASS"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not config._criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        status = config._criteria.get(k, "NOT-COLLECTED")
        terminalreporter.write_line(f"criterion {k:2d} {status:8s} {CRITERIA[k]}")
