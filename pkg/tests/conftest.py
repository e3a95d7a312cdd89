import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# (criterion, verdict, detail) lines collected by test_acceptance.py
ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{verdict:4} {name}: {detail}")
