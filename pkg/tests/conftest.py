import re

import pytest

# criterion number -> (verdict, detail), filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def report():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[number] = ("PASS" if ok else "FAIL", detail)

    return record


def pytest_runtest_logreport(report):
    # a criterion test that raised overrides whatever it recorded before failing
    match = re.search(r"test_criterion_(\d+)_", report.nodeid)
    if match and report.when == "call" and report.failed:
        crash = getattr(report.longrepr, "reprcrash", None)
        ACCEPTANCE[int(match.group(1))] = ("FAIL", crash.message.splitlines()[0] if crash else "test failed")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {detail}")
