import re

_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.failed):
        verdict = "PASS" if report.passed else "FAIL"
        if _RESULTS.get(n, ("PASS",))[0] == "FAIL":
            verdict = "FAIL"  # parametrized criteria pass only if every case does
        _RESULTS[n] = (verdict, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        verdict, title = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {title}")
