import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def naive_znorm_distance(a, b):
    """Independent oracle: z-normalize by hand, then Euclidean distance."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = a.size
    a_const = np.all(a == a[0])
    b_const = np.all(b == b[0])
    if a_const and b_const:
        return 0.0
    if a_const or b_const:
        return float(np.sqrt(2 * m))
    za = (a - a.mean()) / a.std()
    zb = (b - b.mean()) / b.std()
    return float(np.sqrt(np.sum((za - zb) ** 2)))


def naive_profile(values, m, delta):
    """Independent oracle: full pairwise self-join, pure loops over pairs."""
    values = np.asarray(values, dtype=np.float64)
    L = values.size - m + 1
    excl = (m + 1) // 2
    nn = np.full(L, np.inf)
    counts = np.zeros(L, dtype=int)
    for i in range(L):
        for j in range(L):
            if abs(i - j) < excl:
                continue
            d = naive_znorm_distance(values[i : i + m], values[j : j + m])
            nn[i] = min(nn[i], d)
            if d <= delta:
                counts[i] += 1
    score = nn / (1.0 + np.log1p(counts))
    return nn, counts, score
