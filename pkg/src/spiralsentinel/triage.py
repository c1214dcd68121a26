"""Threshold calibration and three-category classification of anomaly scores."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Mapping, Optional, Sequence

import numpy as np

from .frames import TimeFrame


class Category(IntEnum):
    """I: anomaly unlikely; II: suspicious but inconclusive; III: very likely."""

    I = 1
    II = 2
    III = 3

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class CategoryThresholds:
    sensor_id: str
    theta_ii: float
    theta_iii: float

    def __post_init__(self):
        if not 0 <= self.theta_ii <= self.theta_iii:
            raise ValueError(
                f"need 0 <= theta_ii <= theta_iii, got ({self.theta_ii}, {self.theta_iii})"
            )


@dataclass(frozen=True)
class OverviewRegion:
    """A maximal run of timesteps where at least one sensor looks suspicious."""

    frame: TimeFrame
    severity: Category
    sensor_ids: tuple[str, ...]

    def __post_init__(self):
        if self.severity not in (Category.II, Category.III):
            raise ValueError("region severity must be II or III")


class CalibrationError(ValueError):
    pass


def calibrate_sensor(
    sensor_id: str,
    baseline_scores,
    buffer_factor: float = 1.2,
    percentile: Optional[float] = None,
) -> CategoryThresholds:
    """Thresholds from scores the detector produced on known-normal data.

    theta_ii is the baseline maximum (or the given percentile for noisy
    baselines); theta_iii adds a buffer band for normal values that land
    slightly above. The calibration baseline itself always classifies as I.
    """
    scores = np.asarray(baseline_scores, dtype=np.float64)
    if scores.size == 0:
        raise CalibrationError(f"empty baseline for sensor {sensor_id!r}")
    if buffer_factor <= 1:
        raise CalibrationError(f"buffer_factor must be > 1, got {buffer_factor}")
    theta_ii = float(np.percentile(scores, percentile)) if percentile is not None else float(scores.max())
    return CategoryThresholds(sensor_id=sensor_id, theta_ii=theta_ii, theta_iii=buffer_factor * theta_ii)


def calibrate(
    baseline_scores: Mapping[str, Sequence[float]],
    buffer_factor: float = 1.2,
    percentile: Optional[float] = None,
) -> dict[str, CategoryThresholds]:
    return {
        sid: calibrate_sensor(sid, scores, buffer_factor, percentile)
        for sid, scores in baseline_scores.items()
    }


def categorize(score: float, th: CategoryThresholds) -> Category:
    if score <= th.theta_ii:
        return Category.I
    if score <= th.theta_iii:
        return Category.II
    return Category.III


def categorize_array(scores, th: CategoryThresholds) -> np.ndarray:
    """Vectorized categorize; returns int array of Category values."""
    scores = np.asarray(scores, dtype=np.float64)
    cats = np.full(scores.shape, int(Category.I), dtype=np.int8)
    cats[scores > th.theta_ii] = int(Category.II)
    cats[scores > th.theta_iii] = int(Category.III)
    return cats


def spread_scores(scores_by_start, n: int, m: int) -> np.ndarray:
    """Per-timestep score: max over the subsequences containing each timestep.

    A subsequence starting at s covers timesteps [s, s+m); an anomalous
    subsequence therefore flags every timestep it touches, which keeps flagged
    areas aligned with where the anomalous development actually sits.
    """
    scores = np.asarray(scores_by_start, dtype=np.float64)
    L = scores.size
    if L != n - m + 1:
        raise ValueError(f"expected {n - m + 1} subsequence scores, got {L}")
    padded = np.concatenate([np.full(m - 1, -np.inf), scores, np.full(m - 1, -np.inf)])
    windows = np.lib.stride_tricks.sliding_window_view(padded, m)
    return windows[:n].max(axis=1)


def overview_regions(
    categories: Mapping[str, Sequence[int]], gap: int = 0
) -> list[OverviewRegion]:
    """Merge per-sensor categories into disjoint maximal suspicious regions.

    A timestep is suspicious when any sensor rates >= II there. Runs separated
    by at most ``gap`` calm samples merge into one region. Severity is the
    worst category inside the run; sensor_ids lists every sensor that was
    suspicious somewhere in it.
    """
    if not categories:
        return []
    ids = list(categories.keys())
    mat = np.vstack([np.asarray(categories[sid], dtype=np.int8) for sid in ids])
    if mat.ndim != 2 or len({arr.shape for arr in map(np.asarray, categories.values())}) > 1:
        raise ValueError("category sequences must share one length")
    suspicious = (mat >= int(Category.II)).any(axis=0)
    n = suspicious.size

    regions: list[OverviewRegion] = []
    runs: list[list[int]] = []
    t = 0
    while t < n:
        if suspicious[t]:
            start = t
            while t < n and suspicious[t]:
                t += 1
            if runs and start - runs[-1][1] <= gap:
                runs[-1][1] = t
            else:
                runs.append([start, t])
        else:
            t += 1

    for start, end in runs:
        block = mat[:, start:end]
        severity = Category.III if (block >= int(Category.III)).any() else Category.II
        involved = tuple(ids[i] for i in np.flatnonzero((block >= int(Category.II)).any(axis=1)))
        regions.append(
            OverviewRegion(frame=TimeFrame(start, end), severity=severity, sensor_ids=involved)
        )
    return regions
