import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# filled by test_acceptance.py, reported after the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {detail}")
