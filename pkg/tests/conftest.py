import pytest

_RESULTS: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or rep.failed:
        prev = _RESULTS.get(n)
        ok = rep.passed and (prev is None or prev[1])
        _RESULTS[n] = (title, ok, rep.duration + (prev[2] if prev else 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, secs = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title} ({secs:.1f}s)")
