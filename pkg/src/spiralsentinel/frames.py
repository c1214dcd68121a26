"""Half-open sample-index windows used across the pipeline."""
from __future__ import annotations

from dataclasses import dataclass

# Four hours of 1 Hz data; the largest window the detail views will accept.
MAX_FRAME_SAMPLES = 14_400


@dataclass(frozen=True)
class TimeFrame:
    """Half-open window [start, end) of sample indices."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise ValueError(f"invalid frame [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def __contains__(self, t: int) -> bool:
        return self.start <= t < self.end

    def intersects(self, other: "TimeFrame") -> bool:
        return self.start < other.end and other.start < self.end

    @classmethod
    def view(cls, start: int, end: int, cap: int = MAX_FRAME_SAMPLES) -> "TimeFrame":
        """A frame for detail views; rejects windows over the cap.

        Overview regions may legitimately outgrow the cap, so the plain
        constructor does not enforce it; every view surface goes through here.
        """
        frame = cls(start, end)
        if len(frame) > cap:
            raise ValueError(f"frame of {len(frame)} samples exceeds the {cap}-sample cap")
        return frame
