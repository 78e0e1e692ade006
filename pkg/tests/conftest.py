import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict[int, str] = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_criterion_(\d+)", report.nodeid)
    if match and report.when == "call":
        num = int(match.group(1))
        _CRITERIA[num] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {num:2d}: {_CRITERIA[num]}")
