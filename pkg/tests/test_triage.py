import numpy as np
import pytest

from spiralsentinel.triage import (
    CalibrationError,
    Category,
    CategoryThresholds,
    calibrate,
    calibrate_sensor,
    categorize,
    categorize_array,
    overview_regions,
    spread_scores,
)


class TestCalibrate:
    def test_max_and_buffer(self):
        th = calibrate_sensor("s", [0.1, 0.4, 0.2], buffer_factor=1.2)
        assert th.theta_ii == pytest.approx(0.4)
        assert th.theta_iii == pytest.approx(0.48)

    def test_all_zero_baseline(self):
        th = calibrate_sensor("s", np.zeros(50))
        assert th.theta_ii == 0.0 and th.theta_iii == 0.0
        assert categorize(0.001, th) is Category.III

    def test_empty_rejected(self):
        with pytest.raises(CalibrationError):
            calibrate_sensor("s", [])

    def test_baseline_classifies_as_I(self, rng):
        scores = np.abs(rng.normal(size=500))
        th = calibrate_sensor("s", scores)
        assert np.all(categorize_array(scores, th) == int(Category.I))

    def test_percentile_option(self, rng):
        scores = np.linspace(0, 1, 1001)
        th = calibrate_sensor("s", scores, percentile=99.0)
        assert th.theta_ii == pytest.approx(0.99)

    def test_multi_sensor(self):
        out = calibrate({"a": [1.0], "b": [2.0]})
        assert out["a"].theta_ii == 1.0 and out["b"].theta_ii == 2.0


class TestCategorize:
    TH = CategoryThresholds("s", 0.4, 0.48)

    def test_boundary_inclusive_to_I(self):
        assert categorize(0.4, self.TH) is Category.I

    def test_mid_band_is_II(self):
        assert categorize(0.45, self.TH) is Category.II

    def test_above_is_III(self):
        assert categorize(0.5, self.TH) is Category.III

    def test_monotone(self, rng):
        scores = np.sort(rng.uniform(0, 1, 200))
        cats = [categorize(s, self.TH) for s in scores]
        assert all(a <= b for a, b in zip(cats, cats[1:]))

    def test_equal_thresholds_remove_II(self, rng):
        th = CategoryThresholds("s", 0.4, 0.4)
        cats = categorize_array(rng.uniform(0, 1, 1000), th)
        assert int(Category.II) not in cats


class TestOverviewRegions:
    def test_empty_when_all_quiet(self):
        assert overview_regions({"a": np.full(100, 1)}) == []

    def test_run_merging_and_severity(self):
        c = np.full(300, 1)
        c[100:200] = 2
        c[150:160] = 3
        (region,) = overview_regions({"a": c})
        assert (region.frame.start, region.frame.end) == (100, 200)
        assert region.severity is Category.III
        assert region.sensor_ids == ("a",)

    def test_region_partition_properties(self, rng):
        cats = {
            f"s{i}": rng.choice([1, 1, 1, 1, 2, 3], size=500).astype(np.int8)
            for i in range(4)
        }
        regions = overview_regions(cats)
        suspicious = np.zeros(500, dtype=bool)
        for c in cats.values():
            suspicious |= c >= 2
        covered = np.zeros(500, dtype=bool)
        prev_end = -1
        for r in regions:
            assert r.frame.start > prev_end  # disjoint and ordered
            prev_end = r.frame.end
            assert suspicious[r.frame.start : r.frame.end].all()  # gap=0: no calm interior
            covered[r.frame.start : r.frame.end] = True
        assert np.array_equal(covered, suspicious)

    def test_gap_merging(self):
        c = np.full(50, 1)
        c[10:12] = 2
        c[14:16] = 2
        assert len(overview_regions({"a": c}, gap=0)) == 2
        merged = overview_regions({"a": c}, gap=2)
        assert len(merged) == 1
        assert (merged[0].frame.start, merged[0].frame.end) == (10, 16)

    def test_sensor_attribution(self):
        a = np.full(100, 1)
        b = np.full(100, 1)
        a[20:30] = 3
        b[25:35] = 2
        b[60:62] = 2
        regions = overview_regions({"a": a, "b": b})
        assert len(regions) == 2
        assert regions[0].sensor_ids == ("a", "b")
        assert regions[0].severity is Category.III
        assert regions[1].sensor_ids == ("b",)
        assert regions[1].severity is Category.II

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            overview_regions({"a": np.full(10, 1), "b": np.full(9, 1)})


class TestSpreadScores:
    def test_max_over_containing_windows(self):
        scores = np.array([0.0, 5.0, 0.0, 0.0])  # n=7, m=4
        out = spread_scores(scores, n=7, m=4)
        # timestep t sees max over starts [t-3, t] clipped to [0, 3]
        np.testing.assert_array_equal(out, [0, 5, 5, 5, 5, 0, 0])

    def test_constant_is_identity(self):
        out = spread_scores(np.full(11, 2.5), n=20, m=10)
        np.testing.assert_array_equal(out, np.full(20, 2.5))

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            spread_scores(np.zeros(5), n=10, m=4)
