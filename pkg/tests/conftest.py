"""Shared test helpers plus the acceptance-criteria summary hook."""

from __future__ import annotations

_acceptance_lines: list[str] = []


def record_acceptance(name: str, passed: bool, detail: str) -> None:
    _acceptance_lines.append(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
