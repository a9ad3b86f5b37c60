"""Months as integer ordinals (year * 12 + month - 1) and ``YYYY-MM`` labels."""

from __future__ import annotations

import datetime as dt
import re

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


def parse_month(label: str) -> int:
    m = _MONTH_RE.match(label.strip()) if isinstance(label, str) else None
    if not m or not 1 <= int(m.group(2)) <= 12:
        raise ValueError(f"invalid month {label!r}, expected YYYY-MM")
    return int(m.group(1)) * 12 + int(m.group(2)) - 1


def format_month(ordinal: int) -> str:
    return f"{ordinal // 12:04d}-{ordinal % 12 + 1:02d}"


def month_of(date: dt.date) -> int:
    return date.year * 12 + date.month - 1


def month_range(start: int, end: int) -> list[int]:
    """Inclusive range of month ordinals."""
    return list(range(start, end + 1))
