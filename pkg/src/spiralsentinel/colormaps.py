"""256-entry RGB lookup tables for the spiral color scales.

Tables live as `index,r,g,b` CSV files in the package data directory; the
parula-style map is the color-blind friendly default, jet the high-contrast
alternative. Running this module as a script regenerates the files from the
anchor definitions below.
"""
from __future__ import annotations

import csv
from functools import lru_cache
from importlib import resources

import numpy as np

COLORMAPS = ("parula", "jet")

# Compact anchor approximation of MATLAB's parula, interpolated to 256 stops.
_PARULA_ANCHORS = [
    (53, 42, 135),
    (15, 92, 221),
    (20, 129, 214),
    (6, 164, 202),
    (46, 183, 164),
    (135, 191, 119),
    (209, 187, 89),
    (254, 200, 50),
    (249, 251, 14),
]


def _interpolate_anchors(anchors, size: int = 256) -> np.ndarray:
    anchors = np.asarray(anchors, dtype=np.float64)
    x = np.linspace(0.0, 1.0, len(anchors))
    xi = np.linspace(0.0, 1.0, size)
    channels = [np.interp(xi, x, anchors[:, c]) for c in range(3)]
    return np.clip(np.rint(np.stack(channels, axis=1)), 0, 255).astype(np.uint8)


def _jet_table(size: int = 256) -> np.ndarray:
    v = np.linspace(0.0, 1.0, size)
    r = np.clip(1.5 - np.abs(4 * v - 3), 0, 1)
    g = np.clip(1.5 - np.abs(4 * v - 2), 0, 1)
    b = np.clip(1.5 - np.abs(4 * v - 1), 0, 1)
    return np.clip(np.rint(np.stack([r, g, b], axis=1) * 255), 0, 255).astype(np.uint8)


@lru_cache(maxsize=None)
def table(name: str) -> np.ndarray:
    """The (256, 3) uint8 RGB table for a colormap name."""
    if name not in COLORMAPS:
        raise ValueError(f"unknown colormap {name!r}; available: {COLORMAPS}")
    path = resources.files(__package__).joinpath(f"data/{name}.csv")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    data = np.zeros((256, 3), dtype=np.uint8)
    for row in rows[1:]:
        data[int(row[0])] = [int(row[1]), int(row[2]), int(row[3])]
    return data


def hex_color(name: str, index: int) -> str:
    r, g, b = table(name)[int(index)]
    return f"#{r:02x}{g:02x}{b:02x}"


def write_tables(directory) -> None:
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, tab in (("parula", _interpolate_anchors(_PARULA_ANCHORS)), ("jet", _jet_table())):
        with (directory / f"{name}.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "r", "g", "b"])
            for i, (r, g, b) in enumerate(tab):
                writer.writerow([i, int(r), int(g), int(b)])


if __name__ == "__main__":
    from pathlib import Path

    write_tables(Path(__file__).parent / "data")
