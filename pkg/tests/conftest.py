"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

_CRITERIA = []


def pytest_runtest_logreport(report):
    labels = [v for k, v in report.user_properties if k == "criterion"]
    if not labels:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA.append((labels[0], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, duration in sorted(_CRITERIA, key=lambda c: int(c[0].split(":")[0])):
        num, title = label.split(":", 1)
        status = {"passed": "PASS", "skipped": "SKIP"}.get(outcome, "FAIL")
        terminalreporter.write_line(f"{status} criterion {num}:{title} ({duration:.1f} s)")
