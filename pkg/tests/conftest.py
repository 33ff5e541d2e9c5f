import pytest

from latpoly.lattice import boolean, chain, product

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    prev = _CRITERIA.get(number, (title, "PASS"))
    status = "FAIL" if report.failed or prev[1] == "FAIL" else "PASS"
    _CRITERIA[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")


@pytest.fixture(scope="session")
def chain2():
    return chain(2)


@pytest.fixture(scope="session")
def chain3():
    return chain(3)


@pytest.fixture(scope="session")
def chain4():
    return chain(4)


@pytest.fixture(scope="session")
def bool2():
    return boolean(2)


@pytest.fixture(scope="session")
def prod32():
    return product(chain(3), chain(2))


TEST_LATTICES = [chain(2), chain(3), chain(4), boolean(2), product(chain(3), chain(2))]


@pytest.fixture(scope="session", params=TEST_LATTICES, ids=lambda l: l.label)
def lattice(request):
    return request.param
