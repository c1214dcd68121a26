/** Wire types of the triage service JSON API. */

export interface SensorInfo {
  id: string;
  name: string;
  unit: string;
  length: number;
  t0: number;
  dt: number;
  globalMin: number;
  globalMax: number;
}

export interface Frame {
  start: number; // inclusive sample index
  end: number; // exclusive sample index
}

export type Severity = "II" | "III";
export type CategoryName = "I" | "II" | "III";

export interface Region {
  frame: Frame;
  severity: Severity;
  sensorIds: string[];
}

export interface Overview {
  length: number;
  regions: Region[];
}

export interface PeriodEstimate {
  periodSamples: number;
  crossings: number;
  confident: boolean;
}

export interface WindowSensorData {
  values: number[];
  scores: number[];
  categories: CategoryName[];
  periodEstimate: PeriodEstimate;
}

export type WindowData = Record<string, WindowSensorData>;

export interface Segment {
  tStart: number;
  len: number;
  anchorValue: number;
  colorIndex: number;
  thickness: number;
  category: CategoryName;
  polyline: [number, number][];
}

export interface SpiralLayout {
  frame: Frame;
  cycleSamples: number;
  ringSpacing: number;
  segments: Segment[];
  endMarker: { x: number; y: number; colorIndex: number };
}

export interface LiveEvent {
  sensorId: string;
  t: number;
  value: number;
  score: number;
  category: CategoryName;
}
