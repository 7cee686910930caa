"""Shared pytest hooks: print the acceptance-criteria verdict lines."""

from __future__ import annotations

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = next((m for name, m in sys.modules.items()
                if name.rsplit(".", 1)[-1] == "test_acceptance"), None)
    if mod is None:
        return
    results = getattr(mod, "RESULTS", [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for index, name, ok, elapsed in sorted(results):
        verdict = "PASS" if ok else "FAIL"
        timing = f" [{elapsed:.1f}s]" if elapsed else ""
        terminalreporter.write_line(f"criterion {index}: {verdict} ({name}){timing}")
