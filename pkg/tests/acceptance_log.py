"""Shared record of acceptance outcomes, printed once at the end of the run."""

import time

RESULTS = {}
SESSION_START = [time.perf_counter()]
RUNTIME_LIMIT = 300.0


def record(number: int, ok: bool, title: str, detail: str) -> None:
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS[number] = line
    print(line)
