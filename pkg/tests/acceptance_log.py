"""Shared record of acceptance outcomes, printed at the end of a pytest run."""

LINES = []


def report(number: int, name: str, passed: bool, summary: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number} ({name}): {summary}"
    LINES.append(line)
    print(line)
