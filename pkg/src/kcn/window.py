from __future__ import annotations

import re
from dataclasses import dataclass

_SPAN = re.compile(r"^\s*(\d{4})\s*[-–:]\s*(\d{4})\s*$")


@dataclass(frozen=True, order=True)
class TimeWindow:
    """Inclusive publication-year range."""

    start_year: int
    end_year: int
    label: str = ""

    def __post_init__(self):
        if self.start_year > self.end_year:
            raise ValueError(f"window start {self.start_year} after end {self.end_year}")
        if not self.label:
            object.__setattr__(self, "label", f"{self.start_year}-{self.end_year}")

    def __contains__(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    @classmethod
    def parse(cls, text: str, label: str = "") -> "TimeWindow":
        m = _SPAN.match(text)
        if not m:
            raise ValueError(f"bad window {text!r}; expected YYYY-YYYY")
        return cls(int(m.group(1)), int(m.group(2)), label)


DEFAULT_WINDOWS = (
    TimeWindow(2002, 2006),
    TimeWindow(2007, 2011),
    TimeWindow(2012, 2016),
    TimeWindow(2017, 2021),
)


def check_windows(windows) -> None:
    """Raise if windows are unsorted or overlap."""
    for a, b in zip(windows, windows[1:]):
        if b.start_year <= a.end_year:
            raise ValueError(f"windows {a.label} and {b.label} overlap or are out of order")
