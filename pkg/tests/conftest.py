import pytest

# criterion number -> (title, outcome of each test carrying that mark)
_criteria: dict[int, tuple[str, list[bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): test belongs to acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (report.when == "call" or report.failed):
        return
    n, title = mark.args
    _criteria.setdefault(n, (title, []))[1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, results = _criteria[n]
        terminalreporter.write_line(f"criterion {n} ({title}): {'PASS' if all(results) else 'FAIL'}")
