"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

LINES = []


def record(criterion, ok, detail):
    LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    print(LINES[-1])
    return ok
