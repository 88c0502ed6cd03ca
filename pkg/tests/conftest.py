import pytest

from cubepart.codec import decode_all
from cubepart.partition import TARGET


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = mark.args[0]
    prev = _CRITERIA.get(key, (mark.args[1], "PASS"))
    if rep.failed:
        _CRITERIA[key] = (mark.args[1], "FAIL")
    elif rep.when == "call" and rep.skipped and prev[1] == "PASS":
        _CRITERIA[key] = (mark.args[1], "SKIP")
    else:
        _CRITERIA.setdefault(key, prev)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        name, status = _CRITERIA[key]
        terminalreporter.write_line(f"criterion {key:2d} {status}: {name}")


@pytest.fixture(scope="session")
def appendix():
    return decode_all()


@pytest.fixture(scope="session")
def target():
    return TARGET


@pytest.fixture(scope="session")
def reports(appendix):
    from cubepart.analysis import full_report

    return {k: full_report(P, TARGET, str(k)) for k, P in appendix.items()}
