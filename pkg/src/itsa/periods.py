"""Calendar-month arithmetic for monthly time series.

A :class:`Period` is a year-month pair. All indexing in the package is done
on the month count ``year * 12 + (month - 1)`` so consecutive calendar months
differ by exactly one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from functools import total_ordering

_YM_RE = re.compile(r"^(\d{4})-(\d{2})$")


@total_ordering
@dataclass(frozen=True)
class Period:
    """One calendar month, e.g. ``Period(2020, 3)`` for 2020-03."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @property
    def index(self) -> int:
        """Absolute month count; consecutive months differ by 1."""
        return self.year * 12 + (self.month - 1)

    @classmethod
    def from_index(cls, index: int) -> Period:
        return cls(index // 12, index % 12 + 1)

    @classmethod
    def parse(cls, text: str, fmt: str = "YYYY-MM") -> Period:
        """Parse a period string.

        ``fmt`` is either the literal pattern ``"YYYY-MM"`` or a
        ``strptime``-style format containing ``%`` directives.
        """
        text = text.strip()
        if fmt == "YYYY-MM":
            m = _YM_RE.match(text)
            if not m:
                raise ValueError(f"expected YYYY-MM, got {text!r}")
            return cls(int(m.group(1)), int(m.group(2)))
        dt = datetime.strptime(text, fmt)
        return cls(dt.year, dt.month)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def __lt__(self, other: Period) -> bool:
        return self.index < other.index

    def __add__(self, months: int) -> Period:
        return Period.from_index(self.index + months)

    def __sub__(self, other: Period | int):
        """Months between two periods, or this period shifted back."""
        if isinstance(other, Period):
            return self.index - other.index
        return Period.from_index(self.index - other)


def month_range(start: Period, n: int) -> tuple[Period, ...]:
    """``n`` consecutive months starting at ``start``."""
    return tuple(start + i for i in range(n))
