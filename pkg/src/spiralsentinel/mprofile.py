"""Self-join matrix profiles with z-normalized subsequence distance.

Two interchangeable computations back every profile: a fast path that walks
the self-join diagonals with prefix-sum co-moments, and a brute-force
reference that z-normalizes every subsequence explicitly. Both honor the
same degenerate-window rules, so they agree elementwise to well below 1e-6
on sane data.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Fallback subsequence length when no period estimate is available.
DEFAULT_WINDOW = 100

# Windows whose std (relative to the globally rescaled series) falls below this
# are routed through the exact per-pair path; the co-moment formula loses too
# many digits there.
_SUSPECT_SIGMA = 1e-3

# Rolling stds below this get recomputed directly; the cumsum variance
# cancellation is visible there.
_REFINE_SIGMA = 5e-2

# Near-zero minima are re-derived per pair so exact twins report ~0 instead of
# the co-moment noise floor.
_REFINE_NN2 = 1e-6


@dataclass
class AnomalyProfile:
    """Per-start-index anomaly scores for one sensor."""

    sensor_id: str
    m: int
    nn_dist: np.ndarray
    close_count: np.ndarray
    score: np.ndarray
    delta: float

    def __post_init__(self):
        self.nn_dist = np.asarray(self.nn_dist, dtype=np.float64)
        self.close_count = np.asarray(self.close_count, dtype=np.int64)
        self.score = np.asarray(self.score, dtype=np.float64)

    def __len__(self) -> int:
        return int(self.nn_dist.size)

    def validate(self) -> None:
        if not (len(self.nn_dist) == len(self.close_count) == len(self.score)):
            raise ValueError("profile sequences disagree on length")
        if np.any(self.score > self.nn_dist + 1e-12):
            raise ValueError("score exceeds nearest-neighbor distance")
        hi = 2.0 * np.sqrt(self.m) + 1e-6
        if np.any(self.nn_dist < 0) or np.any(self.nn_dist > hi):
            raise ValueError("nearest-neighbor distance outside [0, 2*sqrt(m)]")


def exclusion_zone(m: int) -> int:
    """Trivial-match radius: |i - j| below this is ignored in the self-join."""
    return (m + 1) // 2


def znorm_distance(a, b) -> float:
    """Euclidean distance between the z-normalizations of two subsequences.

    Degenerate windows: constant vs constant is 0; constant vs non-constant is
    sqrt(2m), the distance of uncorrelated signals.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"subsequences must be 1-d and equal length, got {a.shape} vs {b.shape}")
    m = a.size
    if m < 2:
        raise ValueError("subsequence length must be >= 2")
    a_const = np.ptp(a) == 0
    b_const = np.ptp(b) == 0
    if a_const and b_const:
        return 0.0
    if a_const or b_const:
        return float(np.sqrt(2 * m))
    za = (a - a.mean()) / a.std()
    zb = (b - b.mean()) / b.std()
    return float(np.linalg.norm(za - zb))


def _transform(values: np.ndarray) -> np.ndarray:
    """Center and rescale globally; z-normalized distances are invariant to it."""
    c = values.mean()
    s = values.std()
    return (values - c) / (s if s > 0 else 1.0)


def _const_windows(values: np.ndarray, m: int) -> np.ndarray:
    """Exact per-window constancy flags (all m samples equal)."""
    n = values.size
    eq = np.concatenate([[0.0], np.cumsum(values[1:] == values[:-1])])
    return (eq[m - 1 :] - eq[: n - m + 1]) == m - 1


def _rolling_stats(values: np.ndarray, m: int, isconst: np.ndarray | None = None):
    """Per-window mean, population std, and exact-constancy flags."""
    if isconst is None:
        isconst = _const_windows(values, m)
    csum = np.concatenate([[0.0], np.cumsum(values)])
    csum2 = np.concatenate([[0.0], np.cumsum(values * values)])
    mu = (csum[m:] - csum[:-m]) / m
    var = (csum2[m:] - csum2[:-m]) / m - mu * mu
    sig = np.sqrt(np.maximum(var, 0.0))
    sig[isconst] = 0.0
    low = np.flatnonzero(~isconst & (sig < _REFINE_SIGMA))
    if low.size:
        windows = np.lib.stride_tricks.sliding_window_view(values, m)[low]
        mu[low] = windows.mean(axis=1)
        sig[low] = windows.std(axis=1)
    return mu, sig, isconst


def _distances_sq_from_qt(qt, m, mu_q, sig_q, const_q, mu, sig, isconst):
    """Squared z-normalized distances of one query against many windows."""
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (qt - m * mu_q * mu) / (m * sig_q * sig) if sig_q > 0 else np.zeros_like(qt)
        d2 = np.maximum(2 * m * (1.0 - r), 0.0)
    if const_q:
        d2 = np.where(isconst, 0.0, 2.0 * m)
    else:
        d2 = np.where(isconst, 2.0 * m, d2)
    return d2


def _exact_distance_profile(values: np.ndarray, m: int, isconst, idx: int, chunk: int = 4096):
    """Squared distance profile of window ``idx`` via explicit z-normalization.

    Slow but maximally precise: per-window statistics are recomputed directly
    from the raw values, so this is the rescue path for near-constant windows
    and the refinement path for near-zero minima.
    """
    L = values.size - m + 1
    q = values[idx : idx + m]
    out = np.empty(L)
    if isconst[idx]:
        out[:] = 2.0 * m
        out[isconst] = 0.0
        return out
    zq = (q - q.mean()) / q.std()
    windows = np.lib.stride_tricks.sliding_window_view(values, m)
    for lo in range(0, L, chunk):
        hi = min(lo + chunk, L)
        w = windows[lo:hi]
        s = w.std(axis=1)
        s[s == 0] = 1.0
        z = (w - w.mean(axis=1)[:, None]) / s[:, None]
        out[lo:hi] = np.square(z - zq[None, :]).sum(axis=1)
    out[isconst] = 2.0 * m
    return out


def _znorm_rows(values: np.ndarray, m: int, isconst: np.ndarray) -> np.ndarray:
    """Exact z-normalized subsequence matrix; constant rows become zeros."""
    windows = np.lib.stride_tricks.sliding_window_view(values, m)
    sig = windows.std(axis=1)
    sig[sig == 0] = 1.0
    z = (windows - windows.mean(axis=1)[:, None]) / sig[:, None]
    z[isconst] = 0.0
    return z


def _merge_rescues(values, m, isconst, suspect, excl, delta, nn2, counts):
    """Fold exact profiles of suspect windows into the kernel's minima/counts."""
    L = nn2.size
    d2max = delta * delta if delta >= 0 else -1.0
    idxs = np.arange(L)
    for s_idx in np.flatnonzero(suspect):
        d2 = _exact_distance_profile(values, m, isconst, s_idx)
        valid = np.abs(idxs - s_idx) >= excl
        nn2[s_idx] = d2[valid].min()
        counts[s_idx] = int(np.count_nonzero(d2[valid] <= d2max))
        others = valid & ~suspect
        np.minimum(nn2, np.where(others, d2, np.inf), out=nn2)
        counts[others] += d2[others] <= d2max


def _refine_near_zero(values, m, isconst, excl, nn2, rows, block: int = 256):
    """Recompute near-zero minima per pair so exact twins land at ~0."""
    L = nn2.size
    two_m = 2.0 * m
    z = _znorm_rows(values, m, isconst)
    idxs = np.arange(L)
    for lo in range(0, rows.size, block):
        chunk = rows[lo : lo + block]
        d2 = _block_sqdist(z[chunk], z)
        d2[:, isconst] = two_m  # refined rows are non-constant
        d2[np.abs(chunk[:, None] - idxs[None, :]) < excl] = np.inf
        nn2[chunk] = d2.min(axis=1)


def _self_join(values: np.ndarray, m: int, delta: float):
    """Fast path: per-diagonal prefix-sum co-moments over the full self-join."""
    t = _transform(values)
    n = t.size
    L = n - m + 1
    excl = exclusion_zone(m)
    mu, sig, isconst = _rolling_stats(t, m, isconst=_const_windows(values, m))
    suspect = ~isconst & (sig < _SUSPECT_SIGMA)

    nn2 = np.full(L, np.inf)
    counts = np.zeros(L, dtype=np.int64)
    count_close = delta >= 0
    d2max = delta * delta
    two_m = 2.0 * m
    sig_safe = np.where(sig > 0, sig, 1.0)
    msig = m * sig_safe
    mmu = m * mu
    has_const = bool(isconst.any())
    has_suspect = bool(suspect.any())

    buf_prod = np.empty(n)
    buf_qt = np.empty(L)
    buf_d2 = np.empty(L)
    for k in range(excl, L):
        ln = n - k
        lq = L - k
        # co-moments of all pairs (i, i+k) from one prefix sum
        prod = np.multiply(t[:ln], t[k:], out=buf_prod[:ln])
        c = np.cumsum(prod)
        qt = buf_qt[:lq]
        qt[0] = c[m - 1]
        np.subtract(c[m:], c[: lq - 1], out=qt[1:])

        a, b = slice(0, lq), slice(k, L)
        d2 = buf_d2[:lq]
        np.multiply(mmu[a], mu[b], out=d2)
        np.subtract(qt, d2, out=d2)
        d2 /= msig[a]
        d2 /= sig_safe[b]
        np.subtract(1.0, d2, out=d2)
        d2 *= two_m
        np.maximum(d2, 0.0, out=d2)
        if has_const:
            d2[isconst[a] ^ isconst[b]] = two_m
            d2[isconst[a] & isconst[b]] = 0.0
        if has_suspect:
            d2[suspect[a] | suspect[b]] = np.inf

        np.minimum(nn2[a], d2, out=nn2[a])
        np.minimum(nn2[b], d2, out=nn2[b])
        if count_close:
            close = d2 <= d2max
            counts[a] += close
            counts[b] += close

    if has_suspect:
        _merge_rescues(values, m, isconst, suspect, excl, delta, nn2, counts)

    near_zero = np.flatnonzero((nn2 < _REFINE_NN2) & ~suspect & ~isconst)
    if near_zero.size:
        _refine_near_zero(values, m, isconst, excl, nn2, near_zero)
    return np.sqrt(nn2), counts


def adjusted_score(nn_dist: np.ndarray, close_count: np.ndarray) -> np.ndarray:
    """Discount the raw nearest-neighbor distance by how often it recurs."""
    return np.asarray(nn_dist) / (1.0 + np.log1p(close_count))


def auto_delta(nn_dist) -> float:
    """Closeness radius from observed normal variability: twice the median."""
    nn_dist = np.asarray(nn_dist, dtype=np.float64)
    if nn_dist.size == 0:
        raise ValueError("cannot derive delta from an empty profile")
    return 2.0 * float(np.median(nn_dist))


def _check_args(n: int, m: int) -> None:
    if m < 4:
        raise ValueError(f"subsequence length m={m} must be >= 4")
    if n < 2 * m:
        raise ValueError(f"series length {n} must be >= 2*m = {2 * m}")


def matrix_profile(
    values, m: int, delta: float | str = "auto", sensor_id: str = ""
) -> AnomalyProfile:
    """Self-join matrix profile with close-match counting and adjusted scores.

    ``delta="auto"`` resolves the closeness radius to twice the median
    nearest-neighbor distance of this profile (a second counting pass).
    """
    values = np.asarray(values, dtype=np.float64)
    _check_args(values.size, m)
    if delta == "auto":
        nn, _ = _self_join(values, m, -1.0)
        resolved = auto_delta(nn)
        nn, counts = _self_join(values, m, resolved)
    else:
        resolved = float(delta)
        if resolved < 0:
            raise ValueError(f"delta must be >= 0, got {resolved}")
        nn, counts = _self_join(values, m, resolved)
    return AnomalyProfile(
        sensor_id=sensor_id,
        m=m,
        nn_dist=nn,
        close_count=counts,
        score=adjusted_score(nn, counts),
        delta=resolved,
    )


def matrix_profile_brute(
    values, m: int, delta: float | str = "auto", sensor_id: str = "", block: int = 512
) -> AnomalyProfile:
    """Reference implementation: explicit per-pair z-normalized distances.

    O(n^2 * m); exists to cross-check the fast path and serve as the oracle in
    tests. Processes row blocks to bound memory.
    """
    values = np.asarray(values, dtype=np.float64)
    _check_args(values.size, m)
    n = values.size
    L = n - m + 1
    excl = exclusion_zone(m)
    windows = np.lib.stride_tricks.sliding_window_view(values, m)
    mu = windows.mean(axis=1)
    sig = windows.std(axis=1)
    isconst = np.ptp(windows, axis=1) == 0
    sig_safe = np.where(sig > 0, sig, 1.0)
    z = (windows - mu[:, None]) / sig_safe[:, None]
    z = np.where(isconst[:, None], 0.0, z)
    two_m = 2.0 * m

    def pass_over(d2max: float):
        nn2 = np.empty(L)
        counts = np.zeros(L, dtype=np.int64)
        idxs = np.arange(L)
        for lo in range(0, L, block):
            hi = min(lo + block, L)
            d2 = _block_sqdist(z[lo:hi], z)
            rows_const = isconst[lo:hi, None]
            one_const = rows_const ^ isconst[None, :]
            both_const = rows_const & isconst[None, :]
            d2[one_const] = two_m
            d2[both_const] = 0.0
            banned = np.abs(idxs[lo:hi, None] - idxs[None, :]) < excl
            d2[banned] = np.inf
            nn2[lo:hi] = d2.min(axis=1)
            counts[lo:hi] = (d2 <= d2max).sum(axis=1)
        return np.sqrt(nn2), counts

    if delta == "auto":
        nn, _ = pass_over(-1.0)
        resolved = auto_delta(nn)
        nn, counts = pass_over(resolved * resolved)
    else:
        resolved = float(delta)
        if resolved < 0:
            raise ValueError(f"delta must be >= 0, got {resolved}")
        nn, counts = pass_over(resolved * resolved)
    return AnomalyProfile(
        sensor_id=sensor_id,
        m=m,
        nn_dist=nn,
        close_count=counts,
        score=adjusted_score(nn, counts),
        delta=resolved,
    )


def _block_sqdist(zb: np.ndarray, z: np.ndarray) -> np.ndarray:
    """||a-b||^2 for a block of z-normalized rows against all rows."""
    sq_b = np.square(zb).sum(axis=1)
    sq = np.square(z).sum(axis=1)
    d2 = sq_b[:, None] + sq[None, :] - 2.0 * (zb @ z.T)
    return np.maximum(d2, 0.0)


def append_sample(profile: AnomalyProfile, values, v: float) -> tuple[AnomalyProfile, np.ndarray]:
    """Extend the series by one sample and update the profile incrementally.

    Equivalent to a full recompute on the extended series: the new subsequence
    gains an entry, and every existing entry whose distance to it is smaller /
    within delta has its minimum lowered / counter bumped.
    """
    if not np.isfinite(v):
        raise ValueError(f"appended value must be finite, got {v!r}")
    values = np.asarray(values, dtype=np.float64)
    m = profile.m
    new_values = np.append(values, np.float64(v))
    n = new_values.size
    L = n - m + 1
    if L != len(profile) + 1:
        raise ValueError("profile does not match the series it is appended to")
    excl = exclusion_zone(m)

    t = _transform(new_values)
    isconst = _const_windows(new_values, m)
    mu, sig, _ = _rolling_stats(t, m, isconst=isconst)
    suspect = ~isconst & (sig < _SUSPECT_SIGMA)
    q = L - 1

    if suspect.any():
        d2 = _exact_distance_profile(new_values, m, isconst, q)
    else:
        query = t[q : q + m]
        qt = np.convolve(t, query[::-1], mode="valid")
        d2 = _distances_sq_from_qt(
            qt, m, mu[q], sig[q], bool(isconst[q]), mu, sig, isconst
        )
        if d2.min() < _REFINE_NN2 and not isconst[q]:
            d2 = _exact_distance_profile(new_values, m, isconst, q)

    d2max = profile.delta * profile.delta
    valid = np.arange(L) <= q - excl

    nn2 = np.square(profile.nn_dist)
    counts = profile.close_count.copy()
    upd = valid.copy()
    upd[q] = False
    nn2 = np.append(np.minimum(nn2, np.where(upd[:-1], d2[:-1], np.inf)), d2[valid].min())
    counts = np.append(counts + (upd[:-1] & (d2[:-1] <= d2max)), np.count_nonzero(d2[valid] <= d2max))

    nn = np.sqrt(nn2)
    updated = AnomalyProfile(
        sensor_id=profile.sensor_id,
        m=m,
        nn_dist=nn,
        close_count=counts,
        score=adjusted_score(nn, counts),
        delta=profile.delta,
    )
    return updated, new_values


def write_profile_csv(profile: AnomalyProfile, path) -> None:
    """Serialize a profile as `index,nnDist,closeCount,score` CSV."""
    import csv
    from pathlib import Path

    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "nnDist", "closeCount", "score"])
        for i in range(len(profile)):
            writer.writerow(
                [i, repr(float(profile.nn_dist[i])), int(profile.close_count[i]), repr(float(profile.score[i]))]
            )


class StreamingMatrixProfile:
    """Holds one sensor's series and profile, growing by right-appends."""

    def __init__(self, values, m: int, delta: float | str = "auto", sensor_id: str = ""):
        self.values = np.asarray(values, dtype=np.float64).copy()
        self.profile = matrix_profile(self.values, m, delta, sensor_id=sensor_id)

    def __len__(self) -> int:
        return int(self.values.size)

    def append(self, v: float) -> AnomalyProfile:
        self.profile, self.values = append_sample(self.profile, self.values, v)
        return self.profile
