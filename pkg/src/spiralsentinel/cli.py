"""Command-line front end: ingest, generate, detect, calibrate, render, serve.

Every stage reads and writes the data directory (default ./data), so each is
independently runnable and idempotent. Exit codes: 0 success, 1 usage or data
error, 2 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .frames import TimeFrame
from .ingest import IngestError, ScenarioKind, generate_scenario, ingest_csv, write_csv, Dataset
from .mprofile import matrix_profile, write_profile_csv
from .period import estimate_period
from .session import AnalysisSession
from .spiralgeom import SpiralConfig, merge_segments, render_svg
from .storage import (
    PROFILES_DIR,
    load_dataset,
    load_thresholds,
    load_timestep_scores,
    save_dataset,
    save_thresholds,
    save_timestep_scores,
)
from .triage import CalibrationError, calibrate_sensor, categorize_array
from .service.config import load_config


class CliError(Exception):
    """Data or usage problem; reported without a traceback."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _delta_arg(raw: str):
    return raw if raw == "auto" else float(raw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spiralsentinel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a sensor CSV into the data directory")
    p.add_argument("--csv", required=True)
    p.add_argument("--baseline", type=int, required=True, help="leading attack-free samples")
    p.add_argument("--resample", action="store_true", help="forward-fill non-uniform spacing")
    p.add_argument("--data", default="./data")

    p = sub.add_parser("generate", help="write a labeled synthetic scenario CSV")
    p.add_argument("--kind", required=True, choices=[k.value for k in ScenarioKind])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("detect", help="compute profiles, thresholds, and regions")
    p.add_argument("--m", type=int, default=0, help="subsequence length (0: period estimate)")
    p.add_argument("--delta", type=_delta_arg, default="auto")
    p.add_argument("--buffer", type=float, default=1.2)
    p.add_argument("--data", default="./data")

    p = sub.add_parser("calibrate", help="write per-sensor thresholds from baseline scores")
    p.add_argument("--buffer", type=float, default=1.2)
    p.add_argument("--p", type=float, default=None, help="percentile instead of the maximum")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--delta", type=_delta_arg, default="auto")
    p.add_argument("--data", default="./data")

    p = sub.add_parser("render", help="render one sensor's window as a static SVG spiral")
    p.add_argument("--sensor", required=True)
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="end", type=int, required=True)
    p.add_argument("--period", type=float, default=None)
    p.add_argument("--map", dest="colormap", choices=["parula", "jet"], default="parula")
    p.add_argument("--range", dest="range_mode", choices=["global", "local"], default="global")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--thickness", choices=["on", "off"], default="on")
    p.add_argument("--theme", choices=["light", "dark"], default="light")
    p.add_argument("--out", required=True)
    p.add_argument("--data", default="./data")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--live", default=None, help="none, loop, or a replay CSV path")
    p.add_argument("--data", default=None)
    p.add_argument("--config", default=None, help="key=value config file")
    return parser


def _require_dataset(data_dir: str) -> Dataset:
    dataset = load_dataset(data_dir)
    if dataset is None:
        raise CliError(f"no dataset in {data_dir!r}; run `spiralsentinel ingest` first")
    return dataset


def cmd_ingest(args) -> int:
    dataset = ingest_csv(args.csv, baseline_len=args.baseline, resample=args.resample)
    save_dataset(dataset, args.data)
    print(f"{len(dataset.sensors)} sensors, {len(dataset)} samples "
          f"(dt={dataset.dt:g}s, baseline={dataset.baseline_len})")
    if args.resample:
        print("warning: non-uniform spacing forward-filled onto a uniform grid")
    print(f"stored in {args.data}")
    return 0


def cmd_generate(args) -> int:
    series, label = generate_scenario(args.kind, args.n, args.period, args.noise, args.seed)
    out = Path(args.out)
    write_csv(Dataset(sensors=[series]), out)
    sidecar = {
        "kind": label.kind.value,
        "window": None
        if label.window is None
        else {"start": label.window.start, "end": label.window.end},
        "period": args.period,
        "noiseSigma": args.noise,
        "seed": args.seed,
    }
    label_path = out.with_suffix(out.suffix + ".labels.json")
    label_path.write_text(json.dumps(sidecar, indent=2) + "\n")
    print(f"wrote {out} and {label_path}")
    return 0


def cmd_detect(args) -> int:
    dataset = _require_dataset(args.data)
    session = AnalysisSession(
        dataset, m=args.m or None, buffer_factor=args.buffer, delta=args.delta
    )
    existing = load_thresholds(args.data)
    if existing is not None:
        for sid, th in existing.items():
            if sid in session.states:
                session.states[sid].thresholds = th
                session.states[sid]._cache_len = -1
        session._regions_len = -1
        print(f"using thresholds from {args.data}/thresholds.conf")
    else:
        save_thresholds(session.thresholds, args.data)

    profiles_dir = Path(args.data) / PROFILES_DIR
    profiles_dir.mkdir(parents=True, exist_ok=True)
    for sid, st in session.states.items():
        write_profile_csv(st.stream.profile, profiles_dir / f"{sid}.csv")
    save_timestep_scores({sid: st.timestep_scores for sid, st in session.states.items()}, args.data)

    regions = session.regions()
    print(f"{'sensor':<12} {'m':>5} {'delta':>10} {'max score':>10} {'regions':>8}")
    for sid, st in session.states.items():
        involved = sum(sid in r.sensor_ids for r in regions)
        print(f"{sid:<12} {st.m:>5} {st.stream.profile.delta:>10.4g} "
              f"{st.timestep_scores.max():>10.4g} {involved:>8}")
    print(f"total overview regions: {len(regions)}")
    return 0


def cmd_calibrate(args) -> int:
    dataset = _require_dataset(args.data)
    if dataset.baseline_len < 8:
        raise CliError(f"baseline of {dataset.baseline_len} samples is too short to calibrate")
    thresholds = {}
    for series in dataset.sensors:
        baseline = series.values[: dataset.baseline_len]
        if args.m:
            m = args.m
        else:
            est = estimate_period(baseline)
            m = int(round(est.period_samples)) if est.confident else 100
        m = max(4, min(m, dataset.baseline_len // 2))
        profile = matrix_profile(baseline, m, delta=args.delta, sensor_id=series.id)
        thresholds[series.id] = calibrate_sensor(series.id, profile.score, args.buffer, args.p)
    path = save_thresholds(thresholds, args.data)
    print(f"{'sensor':<12} {'thetaII':>12} {'thetaIII':>12}")
    for sid, th in thresholds.items():
        print(f"{sid:<12} {th.theta_ii:>12.6g} {th.theta_iii:>12.6g}")
    print(f"wrote {path}")
    return 0


def cmd_render(args) -> int:
    dataset = _require_dataset(args.data)
    try:
        series = dataset.get(args.sensor)
    except KeyError:
        raise CliError(f"unknown sensor {args.sensor!r}") from None
    if not (0 <= args.start < args.end <= len(dataset)):
        raise CliError(f"invalid frame [{args.start}, {args.end}) for length {len(dataset)}")
    try:
        frame = TimeFrame.view(args.start, args.end)
    except ValueError as exc:
        raise CliError(str(exc)) from None

    scores_by_sensor = load_timestep_scores(args.data)
    thresholds = load_thresholds(args.data)
    if scores_by_sensor is None or thresholds is None or args.sensor not in scores_by_sensor:
        raise CliError(f"no detection artifacts in {args.data!r}; run `spiralsentinel detect` first")
    scores = scores_by_sensor[args.sensor][frame.start : frame.end]
    th = thresholds[args.sensor]
    cats = categorize_array(scores, th)
    values = series.values[frame.start : frame.end]

    period = args.period
    if period is None:
        period = estimate_period(values).period_samples
    elif period <= 0:
        raise CliError("period must be > 0")
    config = SpiralConfig(
        cycle_samples=float(period),
        epsilon=args.epsilon,
        k=args.k,
        colormap=args.colormap,
        value_range=args.range_mode,
    )
    value_range = (
        (series.global_min, series.global_max)
        if args.range_mode == "global"
        else (float(values.min()), float(values.max()))
    )
    layout = merge_segments(
        values, scores, cats, frame, config, th,
        value_range=value_range, thickness_on=args.thickness == "on",
    )
    svg = render_svg([layout], theme=args.theme, labels=[args.sensor])
    Path(args.out).write_text(svg)
    print(f"wrote {args.out} ({len(layout.segments)} segments, period {period:.6g})")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    config = load_config(args.config) if args.config else load_config()
    if args.port is not None:
        config.port = args.port
    if args.data is not None:
        config.data_path = args.data
    if args.live is not None:
        config.live_source = args.live
    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=config.port)
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "generate": cmd_generate,
    "detect": cmd_detect,
    "calibrate": cmd_calibrate,
    "render": cmd_render,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except (CliError, IngestError, CalibrationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        import traceback

        traceback.print_exc()
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
