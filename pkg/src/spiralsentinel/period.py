"""Cycle-length estimation from upward zero crossings of the centered signal."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter1d

MIN_WINDOW = 8
FALLBACK_DIVISOR = 8
DEFAULT_SMOOTHING = 5


@dataclass(frozen=True)
class PeriodEstimate:
    period_samples: float
    crossings: int
    confident: bool


def _fallback(window_len: int) -> PeriodEstimate:
    return PeriodEstimate(period_samples=window_len / FALLBACK_DIVISOR, crossings=0, confident=False)


def upward_crossings(y: np.ndarray) -> np.ndarray:
    """Sub-sample positions where the signal moves from non-positive to positive."""
    idx = np.flatnonzero((y[:-1] <= 0) & (y[1:] > 0))
    if idx.size == 0:
        return np.empty(0)
    return idx + (-y[idx]) / (y[idx + 1] - y[idx])


def estimate_period(window, smoothing: int = DEFAULT_SMOOTHING) -> PeriodEstimate:
    """Mean gap between upward crossings of the smoothed, mean-centered window.

    Falls back to window_len/8 (not confident) when fewer than three upward
    crossings exist; the interactive cycle-length slider is the corrective for
    hard signals, so a fallback beats an exception.
    """
    values = np.asarray(window, dtype=np.float64)
    n = values.size
    if n < MIN_WINDOW:
        return _fallback(n)
    if smoothing < 1:
        raise ValueError(f"smoothing width must be >= 1, got {smoothing}")
    y = uniform_filter1d(values, size=smoothing, mode="nearest") if smoothing > 1 else values
    y = y - y.mean()
    if np.ptp(y) == 0:
        return _fallback(n)

    pos = upward_crossings(y)
    if pos.size < 3:
        return _fallback(n)
    period = float(np.diff(pos).mean())
    if not np.isfinite(period) or period <= 0:
        return _fallback(n)
    return PeriodEstimate(period_samples=period, crossings=int(pos.size), confident=True)
