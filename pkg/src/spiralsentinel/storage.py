"""Data-directory conventions shared by the CLI and the service.

A data directory holds `dataset.csv` (the normalized ingestion schema),
`meta.json` (baseline length, display names, units), `thresholds.conf`
(per-sensor `<id>.thetaII=` / `<id>.thetaIII=` lines), and the detect
artifacts under `profiles/`.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from .ingest import Dataset, ingest_csv, write_csv
from .triage import CategoryThresholds

DATASET_CSV = "dataset.csv"
META_JSON = "meta.json"
THRESHOLDS_CONF = "thresholds.conf"
PROFILES_DIR = "profiles"
SCORES_NPZ = "timestep_scores.npz"


def save_dataset(dataset: Dataset, data_dir: str | Path) -> Path:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    write_csv(dataset, data_dir / DATASET_CSV)
    meta = {
        "baselineLen": dataset.baseline_len,
        "names": {s.id: s.name for s in dataset.sensors},
        "units": {s.id: s.unit for s in dataset.sensors},
    }
    (data_dir / META_JSON).write_text(json.dumps(meta, indent=2) + "\n")
    return data_dir / DATASET_CSV


def load_dataset(data_dir: str | Path, baseline_len: Optional[int] = None) -> Optional[Dataset]:
    data_dir = Path(data_dir)
    csv_path = data_dir / DATASET_CSV
    if not csv_path.exists():
        return None
    meta_path = data_dir / META_JSON
    meta = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    return ingest_csv(
        csv_path,
        baseline_len=meta.get("baselineLen", 0) if baseline_len is None else baseline_len,
        units=meta.get("units"),
        names=meta.get("names"),
    )


def save_thresholds(thresholds: dict[str, CategoryThresholds], data_dir: str | Path) -> Path:
    path = Path(data_dir) / THRESHOLDS_CONF
    lines = []
    for sid in sorted(thresholds):
        th = thresholds[sid]
        lines.append(f"{sid}.thetaII={th.theta_ii!r}")
        lines.append(f"{sid}.thetaIII={th.theta_iii!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def load_thresholds(data_dir: str | Path) -> Optional[dict[str, CategoryThresholds]]:
    path = Path(data_dir) / THRESHOLDS_CONF
    if not path.exists():
        return None
    raw: dict[str, dict[str, float]] = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        sid, _, field = key.rpartition(".")
        raw.setdefault(sid, {})[field] = float(value)
    return {
        sid: CategoryThresholds(sid, fields["thetaII"], fields["thetaIII"])
        for sid, fields in raw.items()
    }


def save_timestep_scores(scores: dict[str, np.ndarray], data_dir: str | Path) -> Path:
    path = Path(data_dir) / SCORES_NPZ
    np.savez_compressed(path, **scores)
    return path


def load_timestep_scores(data_dir: str | Path) -> Optional[dict[str, np.ndarray]]:
    path = Path(data_dir) / SCORES_NPZ
    if not path.exists():
        return None
    with np.load(path) as data:
        return {k: data[k] for k in data.files}
