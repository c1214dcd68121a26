"""Replay sources and the fan-out channel for the live event stream."""
from __future__ import annotations

import asyncio
import csv
import json
from pathlib import Path
from typing import AsyncIterator, Iterator

from ..ingest import Dataset, _parse_value
from ..session import LiveEvent


class CsvReplaySource:
    """Streams rows of a `timestamp,<ids...>` CSV as append ticks."""

    def __init__(self, path: str | Path, sensor_ids: list[str]):
        self.path = Path(path)
        self.sensor_ids = sensor_ids
        self._rows = self._read()

    def _read(self) -> Iterator[dict[str, float]]:
        with self.path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            ids = [h.strip() for h in header[1:]]
            missing = set(self.sensor_ids) - set(ids)
            if missing:
                raise ValueError(f"replay CSV lacks sensors: {sorted(missing)}")
            col = {sid: ids.index(sid) + 1 for sid in self.sensor_ids}
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                yield {
                    sid: _parse_value(row[col[sid]], sid, line_no) for sid in self.sensor_ids
                }

    def __iter__(self) -> Iterator[dict[str, float]]:
        return self._rows


class LoopbackSource:
    """Replays the dataset's own samples from the start, indefinitely."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset

    def __iter__(self) -> Iterator[dict[str, float]]:
        i = 0
        n = len(self.dataset)
        while True:
            yield {s.id: float(s.values[i % n]) for s in self.dataset.sensors}
            i += 1


class Broadcaster:
    """Fans live events out to any number of SSE subscribers."""

    def __init__(self):
        self._subscribers: set[asyncio.Queue] = set()
        self.closed = False

    def publish(self, events: list[LiveEvent]) -> None:
        for q in list(self._subscribers):
            for ev in events:
                q.put_nowait(ev)

    def close(self) -> None:
        self.closed = True
        for q in list(self._subscribers):
            q.put_nowait(None)

    async def subscribe(self) -> AsyncIterator[LiveEvent]:
        q: asyncio.Queue = asyncio.Queue()
        self._subscribers.add(q)
        try:
            while True:
                ev = await q.get()
                if ev is None:
                    return
                yield ev
        finally:
            self._subscribers.discard(q)


def format_sse(event: LiveEvent) -> str:
    payload = json.dumps(
        {
            "sensorId": event.sensor_id,
            "t": event.t,
            "value": event.value,
            "score": event.score,
            "category": str(event.category),
        },
        separators=(",", ":"),
    )
    return f"data: {payload}\n\n"
