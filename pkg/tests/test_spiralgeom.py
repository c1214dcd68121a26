import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from spiralsentinel.frames import TimeFrame
from spiralsentinel.spiralgeom import (
    SpiralConfig,
    colormap_index,
    merge_segments,
    point_at,
    points_at,
    render_svg,
    ring_spacing,
    spotlight_timestep,
    thickness,
)
from spiralsentinel.triage import Category, CategoryThresholds

TH = CategoryThresholds("s", 0.4, 0.48)


def simple_layout(n=500, period=100.0, cat=Category.I, **cfg_kwargs):
    frame = TimeFrame(0, n)
    cfg = SpiralConfig(cycle_samples=period, **cfg_kwargs)
    values = np.sin(2 * np.pi * np.arange(n) / period)
    return merge_segments(values, np.zeros(n), np.full(n, int(cat)), frame, cfg, TH)


class TestPointAt:
    def test_most_recent_sample_at_top_outer(self):
        frame = TimeFrame(0, 1000)
        cfg = SpiralConfig(cycle_samples=100)
        assert point_at(999, frame, cfg) == (0.0, -100.0)

    def test_one_cycle_back_is_one_ring_in(self):
        frame = TimeFrame(0, 1000)
        cfg = SpiralConfig(cycle_samples=100)
        s = ring_spacing(frame, cfg)
        x, y = point_at(899, frame, cfg)
        assert x == pytest.approx(0.0, abs=1e-9)
        assert y == pytest.approx(-(100.0 - s), abs=1e-9)

    def test_four_hour_frame_stays_above_hub(self):
        frame = TimeFrame(0, 14_400)
        cfg = SpiralConfig(cycle_samples=3600.0)
        s = ring_spacing(frame, cfg)
        assert s == pytest.approx((100.0 - 10.0) / 12)
        x, y = point_at(0, frame, cfg)
        assert math.hypot(x, y) > cfg.r_hub

    def test_radius_monotone_in_time(self):
        frame = TimeFrame(0, 1200)
        cfg = SpiralConfig(cycle_samples=150)
        pts = points_at(np.arange(1200), frame, cfg)
        radii = np.hypot(pts[:, 0], pts[:, 1])
        assert np.all(np.diff(radii) > 0)  # forward in time moves outward

    def test_outside_frame_rejected(self):
        frame = TimeFrame(10, 20)
        cfg = SpiralConfig(cycle_samples=5)
        with pytest.raises(ValueError):
            point_at(20, frame, cfg)

    def test_fixed_endpoint_for_any_period(self):
        frame = TimeFrame(100, 900)
        for period in (13.7, 100, 350, 2000):
            cfg = SpiralConfig(cycle_samples=period)
            assert point_at(899, frame, cfg) == (0.0, -100.0)


class TestSpotlight:
    def test_roundtrip_identity(self):
        frame = TimeFrame(0, 1000)
        cfg = SpiralConfig(cycle_samples=100)
        for t in range(0, 1000):
            assert spotlight_timestep(point_at(t, frame, cfg), frame, cfg) == t

    def test_roundtrip_nonzero_frame_start(self):
        frame = TimeFrame(500, 1700)
        cfg = SpiralConfig(cycle_samples=77.5)
        for t in range(500, 1700, 13):
            assert spotlight_timestep(point_at(t, frame, cfg), frame, cfg) == t

    def test_center_hits_innermost_ring(self):
        frame = TimeFrame(0, 1000)
        cfg = SpiralConfig(cycle_samples=100)
        t = spotlight_timestep((0.0, 0.0), frame, cfg)
        u = (999 - t) / 100.0
        assert u >= (999 / 100.0) - 1.0

    def test_random_cursors_near_brute_force(self, rng):
        frame = TimeFrame(0, 2000)
        cfg = SpiralConfig(cycle_samples=250)
        all_pts = points_at(np.arange(2000), frame, cfg)
        arc_per_sample = 2 * math.pi * cfg.r_outer / cfg.cycle_samples
        for _ in range(300):
            cursor = tuple(rng.uniform(-120, 120, size=2))
            t = spotlight_timestep(cursor, frame, cfg)
            d = np.hypot(all_pts[:, 0] - cursor[0], all_pts[:, 1] - cursor[1])
            t_brute = int(np.argmin(d))
            assert d[t] <= d[t_brute] + arc_per_sample

    def test_short_frame_misses_ray(self):
        # frame spans half a revolution; cursor angle beyond it still resolves
        frame = TimeFrame(0, 50)
        cfg = SpiralConfig(cycle_samples=100)
        t = spotlight_timestep((0.0, -90.0), frame, cfg)
        assert 0 <= t < 50


class TestMergeSegments:
    def test_constant_values_split_by_k(self):
        lay = simple_layout(n=250, epsilon=0.1, k=100)
        lay2 = merge_segments(
            np.zeros(250),
            np.zeros(250),
            np.full(250, 1),
            TimeFrame(0, 250),
            SpiralConfig(cycle_samples=50, epsilon=0.1, k=100),
            TH,
        )
        assert [s.length for s in lay2.segments] == [100, 100, 50]

    def test_increasing_values_split_every_step(self):
        n = 120
        values = np.arange(n) * 1.0
        lay = merge_segments(
            values,
            np.zeros(n),
            np.full(n, 1),
            TimeFrame(0, n),
            SpiralConfig(cycle_samples=30, epsilon=0.4, k=50),
            TH,
        )
        assert len(lay.segments) == n
        assert all(s.length == 1 for s in lay.segments)

    def test_partition_and_epsilon_and_k_and_category(self, rng):
        n = 800
        values = rng.normal(size=n).cumsum()
        scores = np.abs(rng.normal(size=n))
        cats = rng.choice([1, 1, 2, 3], size=n)
        frame = TimeFrame(0, n)
        cfg = SpiralConfig(cycle_samples=123.0, epsilon=0.5, k=37)
        lay = merge_segments(values, scores, cats, frame, cfg, TH)
        assert sum(s.length for s in lay.segments) == n
        pos = frame.start
        for seg in lay.segments:
            assert seg.t_start == pos
            pos += seg.length
            assert 1 <= seg.length <= cfg.k
            sl = slice(seg.t_start, seg.t_start + seg.length)
            assert np.abs(values[sl] - seg.anchor_value).max() <= cfg.epsilon
            assert np.all(cats[sl] == int(seg.category))
        assert pos == frame.end

    def test_category_break(self):
        n = 10
        cats = np.array([1, 1, 1, 3, 3, 1, 1, 1, 1, 1])
        lay = merge_segments(
            np.zeros(n),
            np.zeros(n),
            cats,
            TimeFrame(0, n),
            SpiralConfig(cycle_samples=5, epsilon=1.0, k=100),
            TH,
        )
        assert [s.length for s in lay.segments] == [3, 2, 5]
        assert [int(s.category) for s in lay.segments] == [1, 3, 1]

    def test_polylines_share_boundaries(self):
        lay = simple_layout(n=300, epsilon=0.05, k=40)
        for prev, nxt in zip(lay.segments, lay.segments[1:]):
            np.testing.assert_array_equal(prev.polyline[-1], nxt.polyline[0])
        assert lay.segments[-1].polyline.shape[0] == lay.segments[-1].length

    def test_end_marker_at_fixed_endpoint(self):
        lay = simple_layout()
        assert (lay.end_marker.x, lay.end_marker.y) == (0.0, -100.0)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            merge_segments(
                np.zeros(5),
                np.zeros(6),
                np.full(5, 1),
                TimeFrame(0, 5),
                SpiralConfig(cycle_samples=4),
                TH,
            )


class TestColormapIndex:
    def test_bounds(self):
        assert colormap_index(0, 0, 10) == 0
        assert colormap_index(10, 0, 10) == 255
        assert colormap_index(5, 0, 10) == 128
        assert colormap_index(-3, 0, 10) == 0
        assert colormap_index(99, 0, 10) == 255

    def test_degenerate_range(self):
        assert colormap_index(7, 7, 7) == 128


class TestThickness:
    def test_category_bands(self):
        assert thickness(0.2, TH, 1, 6) == 1
        assert thickness(0.44, TH, 1, 6) == pytest.approx(3.5)
        assert thickness(0.9, TH, 1, 6) == 6

    def test_monotone_in_score(self, rng):
        scores = np.sort(rng.uniform(0, 1, 100))
        widths = [thickness(s, TH, 1, 6) for s in scores]
        assert all(a <= b for a, b in zip(widths, widths[1:]))

    def test_ring_clamp(self):
        assert thickness(0.9, TH, 1, 6, ring_spacing=5.0) == 4.0

    def test_constant_mode(self):
        assert thickness(0.9, TH, 1, 6, thickness_on=False) == 1


class TestRenderSvg:
    def test_counts_and_validity(self):
        lay = simple_layout(n=250, epsilon=10.0, k=100)  # 3 segments, all cat I
        assert len(lay.segments) == 3
        svg = render_svg([lay])
        root = ET.fromstring(svg)
        ns = "{http://www.w3.org/2000/svg}"
        g = root.find(f"{ns}g")
        assert len(g.findall(f"{ns}path")) == 3
        assert len(g.findall(f"{ns}circle")) == 1
        assert len(g.findall(f"{ns}text")) == 0

    def test_category_iii_glyph(self):
        lay = simple_layout(cat=Category.III)
        svg = render_svg([lay])
        assert ">!</text>" in svg
        assert "#D40000" in svg

    def test_category_ii_glyph(self):
        lay = simple_layout(cat=Category.II)
        svg = render_svg([lay])
        assert ">?</text>" in svg
        assert "#E6C700" in svg

    def test_dark_theme_background(self):
        svg = render_svg([simple_layout()], theme="dark")
        assert "#14141e" in svg

    def test_multiple_layouts_grid(self):
        svg = render_svg([simple_layout(), simple_layout(), simple_layout()], labels=["a", "b", "c"])
        root = ET.fromstring(svg)
        ns = "{http://www.w3.org/2000/svg}"
        assert len(root.findall(f"{ns}g")) == 3


def test_config_validation():
    with pytest.raises(ValueError):
        SpiralConfig(cycle_samples=0)
    with pytest.raises(ValueError):
        SpiralConfig(cycle_samples=10, r_hub=200)
    with pytest.raises(ValueError):
        SpiralConfig(cycle_samples=10, colormap="viridis")
    with pytest.raises(ValueError):
        SpiralConfig(cycle_samples=10, k=0)


def test_timeframe_cap():
    TimeFrame.view(0, 14_400)
    with pytest.raises(ValueError):
        TimeFrame.view(0, 14_401)
    with pytest.raises(ValueError):
        TimeFrame(5, 5)
