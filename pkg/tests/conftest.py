"""Acceptance bookkeeping: one PASS/FAIL line per criterion at the end of the run."""

_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if call.excinfo is not None and call.when in ("setup", "call", "teardown"):
        _RESULTS[number] = ("FAIL", title)
    elif call.when == "call":
        _RESULTS.setdefault(number, ("PASS", title))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        verdict, title = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
