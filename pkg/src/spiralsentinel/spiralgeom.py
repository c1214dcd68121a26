"""Spiral-plot geometry: layout, segment merging, spotlighting, SVG export.

The spiral is anchored at 12 o'clock on the outer radius by its most recent
sample and winds clockwise into the past, one ring per cycle. Widening the
frame grows the spiral inward; ring spacing shrinks only once the revolution
cap is exceeded, so any frame fits above the hub radius.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import colormaps
from .frames import TimeFrame
from .triage import Category, CategoryThresholds

HIGHLIGHT_II = "#E6C700"
HIGHLIGHT_III = "#D40000"


@dataclass(frozen=True)
class SpiralConfig:
    cycle_samples: float
    r_outer: float = 100.0
    r_hub: float = 10.0
    revolution_cap: int = 12
    epsilon: Optional[float] = None  # None: 1% of the active color range
    k: int = 100
    w_min: float = 1.0
    w_max: float = 6.0
    colormap: str = "parula"
    value_range: str = "global"

    def __post_init__(self):
        if self.cycle_samples <= 0:
            raise ValueError("cycle_samples must be > 0")
        if not self.r_hub < self.r_outer:
            raise ValueError("need r_hub < r_outer")
        if self.w_min > self.w_max:
            raise ValueError("need w_min <= w_max")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.colormap not in colormaps.COLORMAPS:
            raise ValueError(f"unknown colormap {self.colormap!r}")
        if self.value_range not in ("global", "local"):
            raise ValueError("value_range must be 'global' or 'local'")


@dataclass
class SpiralSegment:
    t_start: int
    length: int
    anchor_value: float
    color_index: int
    thickness: float
    category: Category
    polyline: np.ndarray  # (points, 2) drawing coordinates


@dataclass
class EndMarker:
    x: float
    y: float
    color_index: int


@dataclass
class SpiralLayout:
    frame: TimeFrame
    config: SpiralConfig
    ring_spacing: float
    segments: list[SpiralSegment]
    end_marker: EndMarker

    @property
    def worst_category(self) -> Category:
        return max((s.category for s in self.segments), default=Category.I)


def ring_spacing(frame: TimeFrame, config: SpiralConfig) -> float:
    n = len(frame)
    revolutions = math.ceil((n - 1) / config.cycle_samples) if n > 1 else 1
    return (config.r_outer - config.r_hub) / max(config.revolution_cap, revolutions)


def points_at(ts, frame: TimeFrame, config: SpiralConfig, center=(0.0, 0.0)) -> np.ndarray:
    """Drawing coordinates for sample indices; most recent sample at 12 o'clock."""
    ts = np.asarray(ts, dtype=np.float64)
    if np.any(ts < frame.start) or np.any(ts >= frame.end):
        raise ValueError(f"sample index outside frame [{frame.start}, {frame.end})")
    u = (frame.end - 1 - ts) / config.cycle_samples  # revolutions back in time
    s = ring_spacing(frame, config)
    r = config.r_outer - s * u
    beta = -2.0 * np.pi * u  # clockwise-from-top
    cx, cy = center
    return np.stack([cx + r * np.sin(beta), cy - r * np.cos(beta)], axis=-1)


def point_at(t: int, frame: TimeFrame, config: SpiralConfig, center=(0.0, 0.0)) -> tuple[float, float]:
    p = points_at(np.asarray([t]), frame, config, center)[0]
    return float(p[0]), float(p[1])


def colormap_index(v: float, lo: float, hi: float) -> int:
    """Map a value into a 0..255 table index; degenerate ranges hit the middle."""
    if lo > hi:
        raise ValueError(f"need lo <= hi, got ({lo}, {hi})")
    if lo == hi:
        return 128
    unit = min(max((v - lo) / (hi - lo), 0.0), 1.0)
    return int(unit * 255 + 0.5)


def thickness(
    score: float,
    th: CategoryThresholds,
    w_min: float,
    w_max: float,
    ring_spacing: Optional[float] = None,
    thickness_on: bool = True,
) -> float:
    """Line width from anomaly score: minimal in I, maximal in III, linear in II.

    A ring-spacing clamp (0.8 * spacing) keeps fat lines from swallowing their
    neighbors; constant-thickness mode returns the minimum unconditionally.
    """
    if w_min > w_max:
        raise ValueError("need w_min <= w_max")
    if not thickness_on:
        w = w_min
    elif score <= th.theta_ii:
        w = w_min
    elif score >= th.theta_iii:
        w = w_max
    else:
        w = w_min + (w_max - w_min) * (score - th.theta_ii) / (th.theta_iii - th.theta_ii)
    if ring_spacing is not None:
        w = min(w, 0.8 * ring_spacing)
    return w


def merge_segments(
    values,
    scores,
    categories,
    frame: TimeFrame,
    config: SpiralConfig,
    thresholds: CategoryThresholds,
    value_range: Optional[tuple[float, float]] = None,
    thickness_on: bool = True,
    center=(0.0, 0.0),
) -> SpiralLayout:
    """Greedy left-to-right merge of timesteps into renderable spiral segments.

    A segment keeps absorbing samples while they stay within epsilon of its
    first (anchor) value, its length stays below k, and the category does not
    change; category breaks are deliberate so short anomalies keep their own
    stroke. Segments partition the frame.
    """
    values = np.asarray(values, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    categories = np.asarray(categories, dtype=np.int8)
    n = len(frame)
    if not (values.size == scores.size == categories.size == n):
        raise ValueError(
            f"values/scores/categories must each cover the {n}-sample frame, got "
            f"{values.size}/{scores.size}/{categories.size}"
        )
    lo, hi = value_range if value_range is not None else (float(values.min()), float(values.max()))
    eps = config.epsilon if config.epsilon is not None else 0.01 * (hi - lo)
    s = ring_spacing(frame, config)
    all_points = points_at(np.arange(frame.start, frame.end), frame, config, center)

    segments: list[SpiralSegment] = []
    i = 0
    while i < n:
        anchor = values[i]
        cat = categories[i]
        stop = min(i + config.k, n)
        block_bad = (np.abs(values[i:stop] - anchor) > eps) | (categories[i:stop] != cat)
        rel = int(np.argmax(block_bad))
        length = rel if block_bad[rel] else stop - i
        # block_bad[0] is always False: |anchor - anchor| = 0 <= eps
        seg_score = float(scores[i : i + length].max())
        segments.append(
            SpiralSegment(
                t_start=frame.start + i,
                length=length,
                anchor_value=float(anchor),
                color_index=colormap_index(float(anchor), lo, hi),
                thickness=thickness(seg_score, thresholds, config.w_min, config.w_max, s, thickness_on),
                category=Category(int(cat)),
                polyline=all_points[i : min(i + length + 1, n)],
            )
        )
        i += length

    end_point = point_at(frame.end - 1, frame, config, center)
    marker = EndMarker(
        x=end_point[0], y=end_point[1], color_index=colormap_index(float(values[-1]), lo, hi)
    )
    return SpiralLayout(frame=frame, config=config, ring_spacing=s, segments=segments, end_marker=marker)


def spotlight_timestep(
    cursor: tuple[float, float],
    frame: TimeFrame,
    config: SpiralConfig,
    center=(0.0, 0.0),
) -> int:
    """Invert a cursor position to the nearest spiral timestep, analytically.

    The cursor's angle pins the fractional revolution; candidate rings are the
    integer offsets of that fraction, and the ring whose radius best matches
    the cursor distance wins. No drawn geometry is consulted.
    """
    n = len(frame)
    dx = cursor[0] - center[0]
    dy = cursor[1] - center[1]
    rho = math.hypot(dx, dy)
    beta_c = math.atan2(dx, -dy) % (2.0 * math.pi)
    frac = (-beta_c / (2.0 * math.pi)) % 1.0
    u_max = (n - 1) / config.cycle_samples
    s = ring_spacing(frame, config)

    candidates: list[int] = [frame.start, frame.end - 1]
    count = int(math.floor(u_max - frac + 1e-9)) + 1
    if count >= 1:
        us = frac + np.arange(count)
        radii = config.r_outer - s * us
        u = float(us[np.argmin(np.abs(rho - radii))])
        t = round(frame.end - 1 - u * config.cycle_samples)
        candidates.append(int(min(max(t, frame.start), frame.end - 1)))
    # the spiral ends mid-revolution, so an interior or outside cursor can sit
    # angularly past the curve; the endpoints compete on actual distance
    pts = points_at(np.asarray(candidates), frame, config, center)
    d = np.hypot(pts[:, 0] - cursor[0], pts[:, 1] - cursor[1])
    return candidates[int(np.argmin(d))]


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _path_d(polyline: np.ndarray) -> str:
    pts = [f"{_fmt(x)},{_fmt(y)}" for x, y in polyline]
    if len(pts) == 1:
        return f"M {pts[0]}"
    return "M " + " L ".join(pts)


_THEMES = {
    "light": {"bg": "#ffffff", "label": "#222222"},
    "dark": {"bg": "#14141e", "label": "#dddddd"},
}


def render_svg(
    layouts: Sequence[SpiralLayout],
    theme: str = "light",
    labels: Optional[Sequence[str]] = None,
    columns: Optional[int] = None,
) -> str:
    """A standalone SVG document with one spiral group per layout.

    Each segment becomes a path stroked with its colormap color and thickness;
    the most recent sample carries a circular marker, and spirals containing
    category II/III data get a center glyph (? in yellow, ! in red, III wins).
    """
    if not layouts:
        raise ValueError("need at least one layout")
    if theme not in _THEMES:
        raise ValueError(f"unknown theme {theme!r}")
    colors = _THEMES[theme]
    pad = 12.0
    cell = 2 * (max(l.config.r_outer for l in layouts) + pad)
    cols = columns or max(1, math.ceil(math.sqrt(len(layouts))))
    rows = math.ceil(len(layouts) / cols)
    width, height = cols * cell, rows * cell

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:g}" '
        f'height="{height:g}" viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="{colors["bg"]}"/>',
    ]
    for idx, layout in enumerate(layouts):
        cx = (idx % cols) * cell + cell / 2
        cy = (idx // cols) * cell + cell / 2
        tab = layout.config.colormap
        out.append(f'<g transform="translate({cx:g},{cy:g})">')
        for seg in layout.segments:
            out.append(
                f'<path d="{_path_d(seg.polyline)}" fill="none" '
                f'stroke="{colormaps.hex_color(tab, seg.color_index)}" '
                f'stroke-width="{seg.thickness:.2f}" stroke-linecap="round"/>'
            )
        marker_r = 0.04 * layout.config.r_outer
        out.append(
            f'<circle cx="{_fmt(layout.end_marker.x)}" cy="{_fmt(layout.end_marker.y)}" '
            f'r="{marker_r:.2f}" fill="{colormaps.hex_color(tab, layout.end_marker.color_index)}"/>'
        )
        worst = layout.worst_category
        if worst >= Category.II:
            glyph, fill = ("!", HIGHLIGHT_III) if worst is Category.III else ("?", HIGHLIGHT_II)
            size = 1.6 * layout.config.r_hub
            out.append(
                f'<text x="0" y="0" text-anchor="middle" dominant-baseline="central" '
                f'font-family="sans-serif" font-weight="bold" font-size="{size:.1f}" '
                f'fill="{fill}">{glyph}</text>'
            )
        if labels is not None and idx < len(labels):
            out.append(
                f'<text x="0" y="{cell / 2 - 2:.1f}" text-anchor="middle" font-family="sans-serif" '
                f'font-size="10" fill="{colors["label"]}">{labels[idx]}</text>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out)
