"""Service configuration: flat key=value file with environment overrides."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from ..frames import MAX_FRAME_SAMPLES

ENV_PORT = "SENTINEL_PORT"
ENV_DATA = "SENTINEL_DATA"


@dataclass
class ServiceConfig:
    port: int = 8400
    data_path: str = "./data"
    baseline_len: Optional[int] = None  # None: take it from the dataset metadata
    m: int = 0  # 0: per-sensor period estimate
    buffer_factor: float = 1.2
    percentile: Optional[float] = None
    delta: float | str = "auto"
    epsilon: Optional[float] = None
    k: int = 100
    w_min: float = 1.0
    w_max: float = 6.0
    revolution_cap: int = 12
    max_frame_samples: int = MAX_FRAME_SAMPLES
    live_interval_ms: int = 1000
    live_source: str = "none"  # none | loop | path to a replay CSV
    gap: int = 0
    ui_path: str = ""  # static frontend bundle to mount at /ui, if any

    def __post_init__(self):
        for name in ("port", "buffer_factor", "k", "w_min", "w_max", "revolution_cap",
                     "max_frame_samples", "live_interval_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"config field {name} must be positive")


_KEYS = {f.name for f in fields(ServiceConfig)}


def _coerce(name: str, raw: str):
    raw = raw.strip()
    if name in ("data_path", "live_source", "ui_path"):
        return raw
    if name == "delta":
        return raw if raw == "auto" else float(raw)
    if name in ("percentile", "epsilon", "baseline_len"):
        if raw.lower() in ("", "none", "auto"):
            return None
        return int(raw) if name == "baseline_len" else float(raw)
    if name in ("port", "m", "k", "revolution_cap", "max_frame_samples", "live_interval_ms", "gap"):
        return int(raw)
    return float(raw)


def load_config(path: Optional[str | Path] = None, env: Optional[dict] = None) -> ServiceConfig:
    """Read key=value lines (`#` comments allowed), then apply env overrides."""
    values: dict = {}
    if path is not None:
        for line_no, line in enumerate(Path(path).read_text().splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip()
            if key not in _KEYS:
                raise ValueError(f"{path}:{line_no}: unknown config key {key!r}")
            values[key] = _coerce(key, raw)
    env = os.environ if env is None else env
    if env.get(ENV_PORT):
        values["port"] = int(env[ENV_PORT])
    if env.get(ENV_DATA):
        values["data_path"] = env[ENV_DATA]
    return ServiceConfig(**values)
