import numpy as np
import pytest

from spiralsentinel import mprofile as mp
from conftest import naive_profile, naive_znorm_distance


class TestZnormDistance:
    def test_identity_is_zero(self, rng):
        a = rng.normal(size=32)
        assert mp.znorm_distance(a, a) == 0.0

    def test_affine_invariance(self, rng):
        a = rng.normal(size=32)
        assert mp.znorm_distance(a, 3 * a + 5) < 1e-12

    def test_constant_vs_nonconstant_is_sqrt_2m(self, rng):
        a = np.full(32, 7.0)
        b = rng.normal(size=32)
        assert mp.znorm_distance(a, b) == pytest.approx(np.sqrt(64))

    def test_constant_vs_constant_is_zero(self):
        assert mp.znorm_distance(np.full(16, 1.0), np.full(16, -9.0)) == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            mp.znorm_distance(np.zeros(8), np.zeros(9))

    def test_matches_naive_oracle(self, rng):
        for _ in range(50):
            m = int(rng.integers(2, 40))
            a, b = rng.normal(size=m), rng.normal(size=m)
            assert mp.znorm_distance(a, b) == pytest.approx(naive_znorm_distance(a, b), abs=1e-9)

    def test_symmetry(self, rng):
        for _ in range(20):
            a, b = rng.normal(size=24), rng.normal(size=24)
            assert mp.znorm_distance(a, b) == pytest.approx(mp.znorm_distance(b, a), abs=1e-9)


class TestMatrixProfile:
    def test_constant_series_scores_zero(self):
        p = mp.matrix_profile(np.full(200, 3.25), 10, delta=0.0)
        assert np.all(p.nn_dist == 0.0)
        assert np.all(p.score == 0.0)

    def test_spike_in_sine_flagged(self):
        x = np.sin(2 * np.pi * np.arange(2000) / 100)
        x[1500] += 5.0
        for profile in (
            mp.matrix_profile(x, 100, delta="auto"),
            mp.matrix_profile_brute(x, 100, delta="auto"),
        ):
            argmax = int(np.argmax(profile.score))
            assert 1401 <= argmax <= 1500

    def test_exact_repetition_has_zero_distances(self, rng):
        block = rng.normal(size=500)
        p = mp.matrix_profile(np.concatenate([block, block]), 50, delta="auto")
        assert p.nn_dist[:451].max() < 1e-6

    def test_agrees_with_naive_oracle_small(self, rng):
        x = rng.normal(size=60)
        p = mp.matrix_profile(x, 8, delta=2.0)
        b = mp.matrix_profile_brute(x, 8, delta=2.0)
        nn, counts, score = naive_profile(x, 8, 2.0)
        for got in (p, b):
            np.testing.assert_allclose(got.nn_dist, nn, atol=1e-9)
            np.testing.assert_array_equal(got.close_count, counts)
            np.testing.assert_allclose(got.score, score, atol=1e-9)

    def test_fast_equals_brute_on_structured_data(self, rng):
        for trial in range(10):
            m = int(rng.integers(8, 129))
            n = int(rng.integers(2 * m + 10, 1500))
            x = [
                rng.normal(size=n),
                rng.normal(size=n).cumsum(),
                np.sin(2 * np.pi * np.arange(n) / 40) + 0.1 * rng.normal(size=n),
            ][trial % 3]
            f = mp.matrix_profile(x, m, delta="auto")
            b = mp.matrix_profile_brute(x, m, delta=f.delta)
            np.testing.assert_allclose(f.nn_dist, b.nn_dist, atol=1e-6)
            np.testing.assert_array_equal(f.close_count, b.close_count)

    def test_mixed_constant_plateau(self, rng):
        x = rng.normal(size=400)
        x[100:180] = 2.0
        f = mp.matrix_profile(x, 16, delta=1.0)
        b = mp.matrix_profile_brute(x, 16, delta=1.0)
        np.testing.assert_allclose(f.nn_dist, b.nn_dist, atol=1e-6)
        np.testing.assert_array_equal(f.close_count, b.close_count)

    def test_near_constant_plateau(self, rng):
        x = rng.normal(size=600)
        x[200:260] = 5.0 + 1e-9 * rng.normal(size=60)
        f = mp.matrix_profile(x, 20, delta=1.0)
        b = mp.matrix_profile_brute(x, 20, delta=1.0)
        np.testing.assert_allclose(f.nn_dist, b.nn_dist, atol=1e-6)

    def test_affine_invariance(self, rng):
        x = rng.normal(size=400).cumsum()
        a = mp.matrix_profile(x, 20, delta=1.0)
        b = mp.matrix_profile(3 * x + 5, 20, delta=1.0)
        np.testing.assert_allclose(a.nn_dist, b.nn_dist, atol=1e-6)

    def test_exclusion_zone_respected(self, rng):
        # a trivially close neighbor inside the zone must not be used
        x = rng.normal(size=200)
        m = 16
        p = mp.matrix_profile(x, m, delta=0.5)
        excl = mp.exclusion_zone(m)
        L = x.size - m + 1
        for i in (0, L // 2, L - 1):
            best = min(
                mp.znorm_distance(x[i : i + m], x[j : j + m])
                for j in range(L)
                if abs(i - j) >= excl
            )
            assert p.nn_dist[i] == pytest.approx(best, abs=1e-9)

    def test_score_monotone_in_count(self):
        nn = np.full(5, 2.0)
        counts = np.array([0, 1, 5, 50, 500])
        scores = mp.adjusted_score(nn, counts)
        assert np.all(np.diff(scores) < 0)
        assert np.all(scores <= nn)

    def test_nn_dist_upper_bound(self, rng):
        # plenty of candidates per index keeps minima below sqrt(2m)
        for m in (8, 32, 64):
            x = rng.normal(size=1200)
            p = mp.matrix_profile(x, m, delta=0.0)
            assert p.nn_dist.max() <= np.sqrt(2 * m) + 1e-9

    def test_rejects_short_series(self):
        with pytest.raises(ValueError):
            mp.matrix_profile(np.zeros(19), 10, delta=0.0)
        with pytest.raises(ValueError):
            mp.matrix_profile(np.zeros(100), 3, delta=0.0)

    def test_validate_passes(self, rng):
        p = mp.matrix_profile(rng.normal(size=300), 12, delta="auto")
        p.validate()


class TestAutoDelta:
    def test_zero_baseline(self):
        assert mp.auto_delta(np.zeros(100)) == 0.0

    def test_two_times_median(self):
        assert mp.auto_delta([1.0, 2.0, 3.0]) == 4.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mp.auto_delta([])

    def test_swat_scale_fast(self):
        import time

        values = np.random.default_rng(0).normal(size=10_000)
        t0 = time.perf_counter()
        mp.auto_delta(values)
        assert time.perf_counter() - t0 < 0.1


class TestAppendSample:
    def test_append_constant_stays_zero(self):
        x = np.full(100, 2.0)
        p = mp.matrix_profile(x, 10, delta=0.0)
        p2, x2 = mp.append_sample(p, x, 2.0)
        assert p2.nn_dist[-1] == 0.0
        assert np.all(p2.score == 0.0)
        assert x2.size == 101

    def test_streaming_equals_batch(self, rng):
        x = rng.normal(size=500)
        stream = mp.StreamingMatrixProfile(x, 25, delta=0.8)
        for v in rng.normal(size=20):
            stream.append(v)
        batch = mp.matrix_profile(stream.values, 25, delta=0.8)
        np.testing.assert_allclose(stream.profile.nn_dist, batch.nn_dist, atol=1e-9)
        np.testing.assert_array_equal(stream.profile.close_count, batch.close_count)
        np.testing.assert_allclose(stream.profile.score, batch.score, atol=1e-9)

    def test_append_creates_exact_twin_of_first_window(self, rng):
        m = 8
        x = np.concatenate([rng.normal(size=50), rng.normal(size=m - 1)])
        # appending x[m-1] completes a copy of window 0 at the end
        x[-(m - 1) :] = x[: m - 1]
        p = mp.matrix_profile(x, m, delta=0.0)
        p2, _ = mp.append_sample(p, x, float(x[m - 1]))
        assert p2.nn_dist[0] < 1e-6
        assert p2.nn_dist[-1] < 1e-6

    def test_rejects_nonfinite(self):
        x = np.zeros(50)
        p = mp.matrix_profile(x, 10, delta=0.0)
        with pytest.raises(ValueError):
            mp.append_sample(p, x, np.nan)


def test_profile_csv_roundtrip(tmp_path, rng):
    from spiralsentinel.mprofile import matrix_profile, write_profile_csv

    p = matrix_profile(rng.normal(size=200), 10, delta="auto", sensor_id="S1")
    path = tmp_path / "S1.csv"
    write_profile_csv(p, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "index,nnDist,closeCount,score"
    assert len(lines) == len(p) + 1
    first = lines[1].split(",")
    assert int(first[0]) == 0
    assert float(first[1]) == pytest.approx(p.nn_dist[0])
