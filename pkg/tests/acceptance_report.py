"""Collects one PASS/FAIL line per acceptance criterion."""

from __future__ import annotations

LINES: dict[int, str] = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} | {detail}"
    LINES[number] = line
    print(line)
