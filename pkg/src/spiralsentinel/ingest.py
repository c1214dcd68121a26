"""CSV ingestion and synthetic scenario generation for multi-sensor streams."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .frames import TimeFrame


class IngestError(ValueError):
    """Malformed or inconsistent input data; carries the offending line when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass
class SensorSeries:
    """One channel's uniformly sampled readings plus metadata."""

    id: str
    values: np.ndarray
    name: str = ""
    unit: str = ""
    t0: float = 0.0
    dt: float = 1.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.size == 0:
            raise IngestError(f"sensor {self.id!r} has no samples")
        if self.dt <= 0:
            raise IngestError(f"sensor {self.id!r} has non-positive dt {self.dt}")
        if not np.all(np.isfinite(self.values)):
            raise IngestError(f"sensor {self.id!r} contains non-finite values")
        if not self.name:
            self.name = self.id
        self.global_min = float(self.values.min())
        self.global_max = float(self.values.max())

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass
class Dataset:
    """Ordered sensors sharing one clock, with a leading attack-free baseline."""

    sensors: list[SensorSeries]
    baseline_len: int = 0

    def __post_init__(self):
        if not self.sensors:
            raise IngestError("dataset has no sensors")
        first = self.sensors[0]
        for s in self.sensors:
            if len(s) != len(first) or s.t0 != first.t0 or s.dt != first.dt:
                raise IngestError(f"sensor {s.id!r} disagrees on length/t0/dt with {first.id!r}")
        if not 0 <= self.baseline_len <= len(first):
            raise IngestError(f"baseline_len {self.baseline_len} outside [0, {len(first)}]")

    def __len__(self) -> int:
        return len(self.sensors[0])

    @property
    def t0(self) -> float:
        return self.sensors[0].t0

    @property
    def dt(self) -> float:
        return self.sensors[0].dt

    def ids(self) -> list[str]:
        return [s.id for s in self.sensors]

    def get(self, sensor_id: str) -> SensorSeries:
        for s in self.sensors:
            if s.id == sensor_id:
                return s
        raise KeyError(sensor_id)


class ScenarioKind(str, Enum):
    PERIOD_DISRUPTION = "periodDisruption"
    ABNORMAL_DWELL = "abnormalDwell"
    PHASE_SHIFT = "phaseShift"
    ABNORMAL_VALUES = "abnormalValues"
    NONE = "none"


@dataclass(frozen=True)
class ScenarioLabel:
    kind: ScenarioKind
    window: Optional[TimeFrame] = None


def _parse_timestamp(text: str, line: int) -> float:
    text = text.strip()
    try:
        return float(int(text))
    except ValueError:
        pass
    try:
        iso = text[:-1] + "+00:00" if text.endswith("Z") else text
        stamp = datetime.fromisoformat(iso)
        if stamp.tzinfo is None:
            stamp = stamp.replace(tzinfo=timezone.utc)
        return stamp.timestamp()
    except ValueError:
        raise IngestError(f"unparseable timestamp {text!r}", line) from None


def _parse_value(text: str, col: str, line: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise IngestError(f"non-numeric value {text!r} in column {col!r}", line) from None
    if not math.isfinite(v):
        raise IngestError(f"non-finite value {text!r} in column {col!r}", line)
    return v


def ingest_csv(
    path: str | Path,
    baseline_len: int = 0,
    resample: bool = False,
    units: Optional[dict[str, str]] = None,
    names: Optional[dict[str, str]] = None,
) -> Dataset:
    """Parse a `timestamp,<id1>,...,<idK>` CSV into a Dataset.

    Timestamps must be strictly increasing epoch seconds or ISO-8601. Non-uniform
    spacing is rejected unless ``resample`` is set, in which case values are
    forward-filled onto a uniform grid at the modal spacing.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError("empty file") from None
        if len(header) < 2:
            raise IngestError("header must name a timestamp column and at least one sensor", 1)
        ids = [h.strip() for h in header[1:]]
        times: list[float] = []
        columns: list[list[float]] = [[] for _ in ids]
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise IngestError(f"expected {len(header)} fields, got {len(row)}", line_no)
            stamp = _parse_timestamp(row[0], line_no)
            if times and stamp <= times[-1]:
                raise IngestError(f"timestamp {row[0]!r} not strictly increasing", line_no)
            times.append(stamp)
            for k, cell in enumerate(row[1:]):
                columns[k].append(_parse_value(cell, ids[k], line_no))

    if len(times) < 2:
        raise IngestError("need at least two rows of data")
    ts = np.asarray(times)
    diffs = np.diff(ts)
    uniform = np.all(diffs == diffs[0])
    if uniform:
        t0, dt = float(ts[0]), float(diffs[0])
        value_arrays = [np.asarray(col) for col in columns]
    elif not resample:
        bad = int(np.argmax(diffs != diffs[0]))
        raise IngestError(
            f"non-uniform sample spacing at row {bad + 3} "
            f"({diffs[bad]}s vs {diffs[0]}s); pass resample to forward-fill"
        )
    else:
        spacings, counts = np.unique(diffs, return_counts=True)
        dt = float(spacings[np.argmax(counts)])
        t0 = float(ts[0])
        n = int(np.floor((ts[-1] - t0) / dt)) + 1
        grid = t0 + dt * np.arange(n)
        # forward fill: index of the last original sample at or before each grid time
        src = np.searchsorted(ts, grid + dt * 1e-9, side="right") - 1
        value_arrays = [np.asarray(col)[src] for col in columns]

    units = units or {}
    names = names or {}
    sensors = [
        SensorSeries(
            id=sid,
            values=vals,
            name=names.get(sid, sid),
            unit=units.get(sid, ""),
            t0=t0,
            dt=dt,
        )
        for sid, vals in zip(ids, value_arrays)
    ]
    return Dataset(sensors=sensors, baseline_len=baseline_len)


def _format_timestamp(t: float) -> str:
    if float(t).is_integer():
        return str(int(t))
    return datetime.fromtimestamp(t, tz=timezone.utc).isoformat()


def write_csv(dataset: Dataset, path: str | Path) -> None:
    """Emit the dataset in the ingestion schema; values round-trip bit-exactly."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp"] + dataset.ids())
        t0, dt = dataset.t0, dataset.dt
        cols = [s.values for s in dataset.sensors]
        for i in range(len(dataset)):
            writer.writerow([_format_timestamp(t0 + i * dt)] + [repr(float(c[i])) for c in cols])


def scenario_window(kind: ScenarioKind, n: int, period: int) -> Optional[TimeFrame]:
    """Injection window of one period length centered at 0.75*n."""
    if kind is ScenarioKind.NONE:
        return None
    center = int(0.75 * n)
    start = center - period // 2
    return TimeFrame(start, start + period)


def generate_scenario(
    kind: ScenarioKind | str,
    n: int,
    period: int,
    noise_sigma: float = 0.0,
    seed: int = 0,
    sensor_id: str = "SYN1",
) -> tuple[SensorSeries, ScenarioLabel]:
    """Synthesize a sine-based series with one of the anomaly archetypes injected.

    The clean signal is sin(2*pi*t/period) plus Gaussian noise. The anomaly
    occupies a window one period long centered at 0.75*n:

    - periodDisruption: instantaneous frequency drops to period*1.5 inside the
      window (phase accumulates continuously, so the cycle genuinely stretches).
    - abnormalDwell: the clean signal is held at its minimum (-1) for the window.
    - phaseShift: phase advances by half a period from window start onward.
    - abnormalValues: +3 amplitudes added inside the window.
    """
    kind = ScenarioKind(kind)
    if period < 4:
        raise ValueError(f"period {period} < 4")
    if n < 4 * period:
        raise ValueError(f"n {n} < 4*period {4 * period}")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")

    t = np.arange(n, dtype=np.float64)
    window = scenario_window(kind, n, period)
    omega = 2 * np.pi / period

    if kind is ScenarioKind.PERIOD_DISRUPTION:
        rate = np.full(n, omega)
        rate[window.start : window.end] = 2 * np.pi / (1.5 * period)
        phase = np.concatenate([[0.0], np.cumsum(rate[:-1])])
        clean = np.sin(phase)
    elif kind is ScenarioKind.PHASE_SHIFT:
        phase = omega * t
        phase[window.start :] += np.pi
        clean = np.sin(phase)
    else:
        clean = np.sin(omega * t)
        if kind is ScenarioKind.ABNORMAL_DWELL:
            clean[window.start : window.end] = -1.0
        elif kind is ScenarioKind.ABNORMAL_VALUES:
            clean[window.start : window.end] += 3.0

    rng = np.random.default_rng(seed)
    values = clean + rng.normal(0.0, noise_sigma, n) if noise_sigma > 0 else clean
    series = SensorSeries(
        id=sensor_id,
        values=values,
        name=f"{kind.value} scenario",
        unit="",
        t0=0.0,
        dt=1.0,
    )
    return series, ScenarioLabel(kind=kind, window=window)
