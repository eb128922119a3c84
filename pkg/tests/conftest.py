"""Shared pytest wiring.

The acceptance module registers one human-readable line per criterion;
printing them from a terminal-summary hook keeps them visible under the
default capture mode (plain print() would only surface on failure).
"""

ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
