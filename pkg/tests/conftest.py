import sys
from pathlib import Path

# Make the shared oracle helpers importable from every test module.
sys.path.insert(0, str(Path(__file__).parent))

import acceptance_report


def pytest_terminal_summary(terminalreporter):
    if acceptance_report.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report.VERDICTS:
            terminalreporter.write_line(line)
