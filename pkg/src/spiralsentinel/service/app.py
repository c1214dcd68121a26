"""HTTP API over the analysis session, with a server-sent live stream.

All handlers are async and run on the single event loop, as does the live
appender task, so reads always observe a consistent snapshot between appends.
"""
from __future__ import annotations

import asyncio
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .. import colormaps
from ..frames import TimeFrame
from ..session import AnalysisSession
from ..spiralgeom import SpiralLayout
from ..storage import load_dataset
from ..triage import Category
from .config import ServiceConfig
from .live import Broadcaster, CsvReplaySource, LoopbackSource, format_sse
from .models import (
    EndMarkerModel,
    FrameModel,
    OverviewResponse,
    PeriodEstimateModel,
    RegionModel,
    SegmentModel,
    SensorInfo,
    SpiralResponse,
    WindowSensorData,
)

CATEGORY_NAMES = {int(c): c.name for c in Category}


def _category_names(cats) -> list[str]:
    return [CATEGORY_NAMES[int(c)] for c in cats]


def _spiral_response(layout: SpiralLayout) -> SpiralResponse:
    return SpiralResponse(
        frame=FrameModel(start=layout.frame.start, end=layout.frame.end),
        cycleSamples=layout.config.cycle_samples,
        ringSpacing=layout.ring_spacing,
        segments=[
            SegmentModel(
                tStart=seg.t_start,
                len=seg.length,
                anchorValue=seg.anchor_value,
                colorIndex=seg.color_index,
                thickness=seg.thickness,
                category=seg.category.name,
                polyline=[[round(float(x), 2), round(float(y), 2)] for x, y in seg.polyline],
            )
            for seg in layout.segments
        ],
        endMarker=EndMarkerModel(
            x=round(layout.end_marker.x, 2),
            y=round(layout.end_marker.y, 2),
            colorIndex=layout.end_marker.color_index,
        ),
    )


class AppState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.session: Optional[AnalysisSession] = None
        self.broadcaster = Broadcaster()
        self.live_task: Optional[asyncio.Task] = None

    def require_session(self) -> AnalysisSession:
        if self.session is None:
            raise HTTPException(status_code=503, detail="no dataset loaded")
        return self.session

    def make_live_source(self):
        src = self.config.live_source
        if src in ("", "none"):
            return None
        if src == "loop":
            return LoopbackSource(self.session.dataset)
        return CsvReplaySource(src, self.session.ids())

    async def run_live(self, source) -> None:
        interval = self.config.live_interval_ms / 1000.0
        try:
            for row in source:
                await asyncio.sleep(interval)
                events = self.session.append_row(row)
                self.broadcaster.publish(events)
        finally:
            self.broadcaster.close()


def create_app(
    config: Optional[ServiceConfig] = None,
    session: Optional[AnalysisSession] = None,
    live_source=None,
) -> FastAPI:
    """Build the service; pass a prebuilt session (tests) or let startup load
    the data directory named by the config."""
    config = config or ServiceConfig()
    state = AppState(config)
    state.session = session

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if state.session is None:
            dataset = await asyncio.get_event_loop().run_in_executor(
                None, lambda: load_dataset(config.data_path, config.baseline_len)
            )
            if dataset is not None:
                state.session = await asyncio.get_event_loop().run_in_executor(
                    None,
                    lambda: AnalysisSession(
                        dataset,
                        m=config.m or None,
                        buffer_factor=config.buffer_factor,
                        percentile=config.percentile,
                        delta=config.delta,
                        gap=config.gap,
                    ),
                )
        if state.session is not None:
            source = live_source if live_source is not None else state.make_live_source()
            if source is not None:
                state.live_task = asyncio.create_task(state.run_live(source))
        yield
        if state.live_task is not None:
            state.live_task.cancel()

    app = FastAPI(title="spiralsentinel", lifespan=lifespan)
    app.state.sentinel = state

    @app.exception_handler(HTTPException)
    async def http_error(_: Request, exc: HTTPException):
        return JSONResponse(status_code=exc.status_code, content={"error": str(exc.detail)})

    def parse_frame(start: int, end: int) -> TimeFrame:
        sess = state.require_session()
        if start < 0 or end <= start or end > len(sess):
            raise HTTPException(400, f"invalid frame [{start}, {end}) for length {len(sess)}")
        if end - start > config.max_frame_samples:
            raise HTTPException(
                400,
                f"frame of {end - start} samples exceeds the {config.max_frame_samples}-sample cap",
            )
        return TimeFrame(start, end)

    def get_state(sensor_id: str):
        sess = state.require_session()
        try:
            return sess.get(sensor_id)
        except KeyError:
            raise HTTPException(404, f"unknown sensor {sensor_id!r}") from None

    @app.get("/api/sensors", response_model=list[SensorInfo])
    async def sensors():
        sess = state.require_session()
        return [
            SensorInfo(
                id=st.series.id,
                name=st.series.name,
                unit=st.series.unit,
                length=len(st.stream),
                t0=st.series.t0,
                dt=st.series.dt,
                globalMin=st.global_min,
                globalMax=st.global_max,
            )
            for st in sess.states.values()
        ]

    @app.get("/api/overview", response_model=OverviewResponse)
    async def overview():
        sess = state.require_session()
        return OverviewResponse(
            length=len(sess),
            regions=[
                RegionModel(
                    frame=FrameModel(start=r.frame.start, end=r.frame.end),
                    severity=r.severity.name,
                    sensorIds=list(r.sensor_ids),
                )
                for r in sess.regions()
            ],
        )

    @app.get("/api/window", response_model=dict[str, WindowSensorData])
    async def window(
        start: int = Query(alias="from"),
        end: int = Query(alias="to"),
        sensors: Optional[str] = None,
    ):
        sess = state.require_session()
        frame = parse_frame(start, end)
        ids = [s for s in sensors.split(",") if s] if sensors else None
        if ids:
            for sid in ids:
                get_state(sid)
        data = sess.window(ids, frame)
        return {
            sid: WindowSensorData(
                values=[float(v) for v in d["values"]],
                scores=[float(v) for v in d["scores"]],
                categories=_category_names(d["categories"]),
                periodEstimate=PeriodEstimateModel(
                    periodSamples=d["period"].period_samples,
                    crossings=d["period"].crossings,
                    confident=d["period"].confident,
                ),
            )
            for sid, d in data.items()
        }

    @app.get("/api/spiral", response_model=SpiralResponse)
    async def spiral(
        sensor: str,
        start: int = Query(alias="from"),
        end: int = Query(alias="to"),
        period: Optional[float] = None,
        epsilon: Optional[float] = None,
        k: Optional[int] = None,
        range_mode: str = Query(default="global", alias="range"),
        colormap: str = Query(default="parula", alias="map"),
        thickness: str = "on",
    ):
        frame = parse_frame(start, end)
        get_state(sensor)
        if period is not None and period <= 0:
            raise HTTPException(400, "period must be > 0")
        if k is not None and k < 1:
            raise HTTPException(400, "k must be >= 1")
        if epsilon is not None and epsilon < 0:
            raise HTTPException(400, "epsilon must be >= 0")
        if range_mode not in ("global", "local"):
            raise HTTPException(400, "range must be 'global' or 'local'")
        if colormap not in colormaps.COLORMAPS:
            raise HTTPException(400, f"map must be one of {colormaps.COLORMAPS}")
        if thickness not in ("on", "off"):
            raise HTTPException(400, "thickness must be 'on' or 'off'")
        sess = state.require_session()
        layout = sess.spiral(
            sensor,
            frame,
            period=period,
            epsilon=epsilon if epsilon is not None else config.epsilon,
            k=k if k is not None else config.k,
            colormap=colormap,
            value_range=range_mode,
            thickness_on=thickness == "on",
            w_min=config.w_min,
            w_max=config.w_max,
            revolution_cap=config.revolution_cap,
        )
        return _spiral_response(layout)

    @app.get("/api/live")
    async def live():
        state.require_session()
        if state.broadcaster.closed:
            raise HTTPException(503, "live stream not running")

        async def stream():
            async for event in state.broadcaster.subscribe():
                yield format_sse(event)

        return StreamingResponse(stream(), media_type="text/event-stream")

    ui_path = Path(config.ui_path) if config.ui_path else None
    if ui_path is not None and ui_path.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_path), html=True), name="ui")

    return app
