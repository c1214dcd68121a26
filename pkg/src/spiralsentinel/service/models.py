"""Pydantic wire models; field names are the JSON contract."""
from __future__ import annotations

from pydantic import BaseModel, RootModel


class SensorInfo(BaseModel):
    id: str
    name: str
    unit: str
    length: int
    t0: float
    dt: float
    globalMin: float
    globalMax: float


class FrameModel(BaseModel):
    start: int
    end: int


class RegionModel(BaseModel):
    frame: FrameModel
    severity: str
    sensorIds: list[str]


class OverviewResponse(BaseModel):
    length: int
    regions: list[RegionModel]


class PeriodEstimateModel(BaseModel):
    periodSamples: float
    crossings: int
    confident: bool


class WindowSensorData(BaseModel):
    values: list[float]
    scores: list[float]
    categories: list[str]
    periodEstimate: PeriodEstimateModel


class WindowResponse(RootModel):
    root: dict[str, WindowSensorData]


class SegmentModel(BaseModel):
    tStart: int
    len: int
    anchorValue: float
    colorIndex: int
    thickness: float
    category: str
    polyline: list[list[float]]


class EndMarkerModel(BaseModel):
    x: float
    y: float
    colorIndex: int


class SpiralResponse(BaseModel):
    frame: FrameModel
    cycleSamples: float
    ringSpacing: float
    segments: list[SegmentModel]
    endMarker: EndMarkerModel


class ErrorResponse(BaseModel):
    error: str
