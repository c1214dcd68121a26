"""Triage analysis for periodic industrial sensor streams.

Matrix-profile anomaly scoring, baseline-calibrated three-category triage,
and spiral-plot layouts, served over HTTP to interactive clients and exported
as static SVG from the CLI.
"""

from .frames import MAX_FRAME_SAMPLES, TimeFrame
from .ingest import (
    Dataset,
    IngestError,
    ScenarioKind,
    ScenarioLabel,
    SensorSeries,
    generate_scenario,
    ingest_csv,
    write_csv,
)
from .mprofile import (
    AnomalyProfile,
    StreamingMatrixProfile,
    append_sample,
    auto_delta,
    matrix_profile,
    matrix_profile_brute,
    znorm_distance,
)
from .period import PeriodEstimate, estimate_period
from .spiralgeom import (
    SpiralConfig,
    SpiralLayout,
    SpiralSegment,
    merge_segments,
    point_at,
    render_svg,
    spotlight_timestep,
)
from .triage import (
    CalibrationError,
    Category,
    CategoryThresholds,
    OverviewRegion,
    calibrate,
    categorize,
    overview_regions,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_FRAME_SAMPLES",
    "TimeFrame",
    "Dataset",
    "IngestError",
    "ScenarioKind",
    "ScenarioLabel",
    "SensorSeries",
    "generate_scenario",
    "ingest_csv",
    "write_csv",
    "AnomalyProfile",
    "StreamingMatrixProfile",
    "append_sample",
    "auto_delta",
    "matrix_profile",
    "matrix_profile_brute",
    "znorm_distance",
    "PeriodEstimate",
    "estimate_period",
    "SpiralConfig",
    "SpiralLayout",
    "SpiralSegment",
    "merge_segments",
    "point_at",
    "render_svg",
    "spotlight_timestep",
    "CalibrationError",
    "Category",
    "CategoryThresholds",
    "OverviewRegion",
    "calibrate",
    "categorize",
    "overview_regions",
    "__version__",
]
