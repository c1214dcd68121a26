"""End-to-end analysis pipeline shared by the service and the CLI.

Calibration follows the baseline contract: per sensor, a self-join profile of
the attack-free prefix alone yields the closeness radius and the category
thresholds ("scores obtained on normal data"), and the detection profile is a
full self-join over baseline plus monitored data. Full-join scores inside the
baseline can only shrink relative to the prefix-only profile (more candidates
lower the minima, more close matches raise the counter), so the baseline
always classifies as category I.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .frames import TimeFrame
from .ingest import Dataset, SensorSeries
from .mprofile import (
    DEFAULT_WINDOW,
    AnomalyProfile,
    StreamingMatrixProfile,
    matrix_profile,
)
from .period import estimate_period
from .spiralgeom import SpiralConfig, SpiralLayout, merge_segments
from .triage import (
    CalibrationError,
    Category,
    CategoryThresholds,
    OverviewRegion,
    calibrate_sensor,
    categorize,
    categorize_array,
    overview_regions,
    spread_scores,
)

MIN_BASELINE = 8


@dataclass
class LiveEvent:
    sensor_id: str
    t: int
    value: float
    score: float
    category: Category


class SensorState:
    """One sensor's streaming profile, thresholds, and per-timestep caches."""

    def __init__(
        self,
        series: SensorSeries,
        m: int,
        delta: float,
        thresholds: CategoryThresholds,
        baseline_profile: AnomalyProfile,
    ):
        self.series = series
        self.m = m
        self.thresholds = thresholds
        self.baseline_profile = baseline_profile
        self.stream = StreamingMatrixProfile(series.values, m, delta, sensor_id=series.id)
        self.global_min = series.global_min
        self.global_max = series.global_max
        self._cache_len = -1
        self._spread: np.ndarray = np.empty(0)
        self._cats: np.ndarray = np.empty(0)

    @property
    def values(self) -> np.ndarray:
        return self.stream.values

    def _refresh(self) -> None:
        n = len(self.stream)
        if self._cache_len == n:
            return
        self._spread = spread_scores(self.stream.profile.score, n, self.m)
        self._cats = categorize_array(self._spread, self.thresholds)
        self._cache_len = n

    @property
    def timestep_scores(self) -> np.ndarray:
        self._refresh()
        return self._spread

    @property
    def categories(self) -> np.ndarray:
        self._refresh()
        return self._cats

    def append(self, value: float) -> LiveEvent:
        self.stream.append(value)
        self.global_min = min(self.global_min, float(value))
        self.global_max = max(self.global_max, float(value))
        t = len(self.stream) - 1
        score = float(self.stream.profile.score[-1])
        return LiveEvent(
            sensor_id=self.series.id,
            t=t,
            value=float(value),
            score=score,
            category=categorize(score, self.thresholds),
        )


def _pick_window(series: SensorSeries, baseline_len: int, m: int | None) -> int:
    if m is not None and m > 0:
        chosen = m
    else:
        est = estimate_period(series.values[:baseline_len])
        chosen = int(round(est.period_samples)) if est.confident else DEFAULT_WINDOW
    n = len(series)
    chosen = min(chosen, baseline_len // 2, n // 2)
    return max(chosen, 4)


class AnalysisSession:
    """Dataset plus everything derived from it, ready to serve queries."""

    def __init__(
        self,
        dataset: Dataset,
        m: Optional[int] = None,
        buffer_factor: float = 1.2,
        percentile: Optional[float] = None,
        delta: float | str = "auto",
        gap: int = 0,
        workers: Optional[int] = None,
    ):
        if dataset.baseline_len < MIN_BASELINE:
            raise CalibrationError(
                f"baseline of {dataset.baseline_len} samples is too short to calibrate "
                f"(need >= {MIN_BASELINE})"
            )
        self.dataset = dataset
        self.gap = gap
        self._regions_len = -1
        self._regions: list[OverviewRegion] = []

        def build(series: SensorSeries) -> SensorState:
            window = _pick_window(series, dataset.baseline_len, m)
            baseline = matrix_profile(
                series.values[: dataset.baseline_len], window, delta, sensor_id=series.id
            )
            thresholds = calibrate_sensor(series.id, baseline.score, buffer_factor, percentile)
            return SensorState(series, window, baseline.delta, thresholds, baseline)

        # the profile kernel is a python-level loop over numpy calls, so thread
        # pools lose to the GIL; keep serial unless explicitly asked otherwise
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                states = list(pool.map(build, dataset.sensors))
        else:
            states = [build(s) for s in dataset.sensors]
        self.states: dict[str, SensorState] = {s.series.id: s for s in states}

    def __len__(self) -> int:
        return len(next(iter(self.states.values())).stream)

    def ids(self) -> list[str]:
        return list(self.states.keys())

    def get(self, sensor_id: str) -> SensorState:
        try:
            return self.states[sensor_id]
        except KeyError:
            raise KeyError(f"unknown sensor {sensor_id!r}") from None

    @property
    def thresholds(self) -> dict[str, CategoryThresholds]:
        return {sid: st.thresholds for sid, st in self.states.items()}

    def regions(self) -> list[OverviewRegion]:
        n = len(self)
        if self._regions_len != n:
            cats = {sid: st.categories for sid, st in self.states.items()}
            self._regions = overview_regions(cats, gap=self.gap)
            self._regions_len = n
        return self._regions

    def window(
        self, sensor_ids: Optional[Sequence[str]], frame: TimeFrame
    ) -> dict[str, dict]:
        if frame.end > len(self):
            raise ValueError(f"frame end {frame.end} beyond data length {len(self)}")
        out = {}
        for sid in sensor_ids if sensor_ids is not None else self.ids():
            st = self.get(sid)
            values = st.values[frame.start : frame.end]
            out[sid] = {
                "values": values,
                "scores": st.timestep_scores[frame.start : frame.end],
                "categories": st.categories[frame.start : frame.end],
                "period": estimate_period(values),
            }
        return out

    def spiral(
        self,
        sensor_id: str,
        frame: TimeFrame,
        period: Optional[float] = None,
        epsilon: Optional[float] = None,
        k: int = 100,
        colormap: str = "parula",
        value_range: str = "global",
        thickness_on: bool = True,
        r_outer: float = 100.0,
        r_hub: float = 10.0,
        w_min: float = 1.0,
        w_max: float = 6.0,
        revolution_cap: int = 12,
    ) -> SpiralLayout:
        st = self.get(sensor_id)
        if frame.end > len(self):
            raise ValueError(f"frame end {frame.end} beyond data length {len(self)}")
        values = st.values[frame.start : frame.end]
        if period is None:
            est = estimate_period(values)
            period = est.period_samples
        config = SpiralConfig(
            cycle_samples=float(period),
            r_outer=r_outer,
            r_hub=r_hub,
            revolution_cap=revolution_cap,
            epsilon=epsilon,
            k=k,
            w_min=w_min,
            w_max=w_max,
            colormap=colormap,
            value_range=value_range,
        )
        if value_range == "global":
            rng = (st.global_min, st.global_max)
        else:
            rng = (float(values.min()), float(values.max()))
        return merge_segments(
            values,
            st.timestep_scores[frame.start : frame.end],
            st.categories[frame.start : frame.end],
            frame,
            config,
            st.thresholds,
            value_range=rng,
            thickness_on=thickness_on,
        )

    def append_row(self, row: Mapping[str, float]) -> list[LiveEvent]:
        """Single-writer append of one sample per sensor; returns live events."""
        missing = set(self.ids()) - set(row)
        if missing:
            raise ValueError(f"append row missing sensors: {sorted(missing)}")
        events = [self.states[sid].append(float(row[sid])) for sid in self.ids()]
        self._regions_len = -1
        return events
