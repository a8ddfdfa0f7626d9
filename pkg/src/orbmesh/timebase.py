"""Time representation helpers.

All timestamps in this package are integer milliseconds since the Unix
epoch, UTC.  Human-facing I/O uses ISO-8601 with millisecond precision
and a trailing ``Z``.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

from .errors import InputError

# 2000-01-01T12:00:00Z, the J2000.0 reference epoch.
J2000_MS = 946_728_000_000

MS_PER_DAY = 86_400_000


def ms_from_datetime(dt: datetime) -> int:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return round(dt.timestamp() * 1000.0)


def datetime_from_ms(ms: int) -> datetime:
    return datetime.fromtimestamp(ms / 1000.0, tz=timezone.utc)


def iso_from_ms(ms: int) -> str:
    dt = datetime_from_ms(ms)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"


def ms_from_iso(text: str) -> int:
    cleaned = text.strip()
    if cleaned.endswith("Z"):
        cleaned = cleaned[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(cleaned)
    except ValueError as exc:
        raise InputError(f"invalid ISO-8601 timestamp: {text!r}") from exc
    return ms_from_datetime(dt)


def full_year(two_digit: int) -> int:
    """Expand a two-digit year with the conventional 1957-2056 pivot."""
    return 2000 + two_digit if two_digit < 57 else 1900 + two_digit


def epoch_ms_from_year_day(epoch_year: int, epoch_day: float) -> int:
    """Convert a two-digit year plus fractional day-of-year to epoch ms.

    Day 1.0 is midnight UTC on January 1st.
    """
    year = full_year(epoch_year)
    start = datetime(year, 1, 1, tzinfo=timezone.utc)
    dt = start + timedelta(days=epoch_day - 1.0)
    return ms_from_datetime(dt)
