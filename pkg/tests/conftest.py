import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_acceptance: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _acceptance.append((props["criterion"], "PASS" if report.passed else "FAIL", props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status, detail in sorted(_acceptance, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"[{status}] criterion {criterion}" + (f" ({detail})" if detail else ""))


@pytest.fixture
def criterion(record_property):
    """Tag an acceptance test; the summary prints one line per tagged test."""

    def tag(name: str, detail: str = ""):
        record_property("criterion", name)
        if detail:
            record_property("detail", detail)

    return tag
