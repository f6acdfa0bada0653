"""Shared pytest hooks.

Collects the outcome of each acceptance test and prints a one-line
PASS/FAIL verdict per criterion at the end of the run, so the
acceptance status is readable without scrolling through the full log.
"""

import re

_CRITERION_RE = re.compile(r"test_criterion_(\d+)_(\w+)")
_results = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _CRITERION_RE.search(report.nodeid)
    if m is None:
        return
    number = int(m.group(1))
    label = m.group(2).replace("_", " ")
    if report.when == "call":
        verdict = "PASS" if report.passed else "FAIL"
        _results[number] = (label, verdict)
    elif report.when == "setup":
        if report.failed:
            _results[number] = (label, "FAIL")
        elif report.skipped:
            _results[number] = (label, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tw = terminalreporter
    tw.section("acceptance criteria")
    for number in sorted(_results):
        label, verdict = _results[number]
        tw.write_line("criterion %2d (%s): %s" % (number, label, verdict))
