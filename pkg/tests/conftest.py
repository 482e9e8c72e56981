"""Shared test plumbing.

The acceptance suite records one line per criterion here; the summary hook
prints the table after the normal pytest output so a run ends with a compact
pass/fail ledger of the shipped guarantees.
"""

RESULTS: dict[int, tuple[str, bool, float]] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        label, ok, seconds = RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:2d}: {verdict}  {label}  ({seconds:.2f}s)"
        )
