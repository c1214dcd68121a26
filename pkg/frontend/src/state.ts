/** UI state and its pure transition rules.
 *
 * All frame arithmetic lives here so the cap logic is testable: no code path
 * can produce a selected frame longer than MAX_FRAME_SAMPLES.
 */
import type { Frame, Region } from "./types.js";

export const MAX_FRAME_SAMPLES = 14_400;

export interface UiState {
  dataLength: number;
  selectedFrame: Frame;
  visibleSensors: Set<string>;
  perSensorPeriod: Map<string, number>;
  colormap: "parula" | "jet";
  range: "global" | "local";
  thicknessOn: boolean;
  theme: "light" | "dark";
  liveMode: boolean;
  hoveredTimestep: number | null;
}

export function initialState(dataLength: number, sensorIds: string[]): UiState {
  const size = Math.min(dataLength, MAX_FRAME_SAMPLES);
  return {
    dataLength,
    selectedFrame: { start: dataLength - size, end: dataLength },
    visibleSensors: new Set(sensorIds),
    perSensorPeriod: new Map(),
    colormap: "parula",
    range: "global",
    thicknessOn: true,
    theme: "light",
    liveMode: false,
    hoveredTimestep: null,
  };
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(Math.max(v, lo), hi);
}

export function frameLength(f: Frame): number {
  return f.end - f.start;
}

/** Drag one border; if the result would exceed the cap, the border NOT being
 * dragged gives way so the selection stays valid. */
export function dragBorder(
  state: UiState,
  border: "start" | "end",
  to: number,
): Frame {
  const { dataLength } = state;
  let { start, end } = state.selectedFrame;
  if (border === "start") {
    start = clamp(Math.round(to), 0, end - 1);
    if (end - start > MAX_FRAME_SAMPLES) end = start + MAX_FRAME_SAMPLES;
  } else {
    end = clamp(Math.round(to), start + 1, dataLength);
    if (end - start > MAX_FRAME_SAMPLES) start = end - MAX_FRAME_SAMPLES;
  }
  return { start, end };
}

/** Shift the whole selection by its own length (arrow buttons), size kept. */
export function shiftFrame(state: UiState, direction: -1 | 1): Frame {
  const size = frameLength(state.selectedFrame);
  let start = state.selectedFrame.start + direction * size;
  start = clamp(start, 0, state.dataLength - size);
  return { start, end: start + size };
}

/** Fit the selection to a marker's region and select its sensors. Regions
 * longer than the cap keep their start, so the anomaly onset stays visible. */
export function fitToRegion(state: UiState, region: Region): Pick<UiState, "selectedFrame" | "visibleSensors"> {
  const start = region.frame.start;
  const end = Math.min(region.frame.end, start + MAX_FRAME_SAMPLES, state.dataLength);
  return {
    selectedFrame: { start, end: Math.max(end, start + 1) },
    visibleSensors: new Set(region.sensorIds),
  };
}

/** Direct timestamp entry below the slider. */
export function enterFrame(state: UiState, start: number, end: number): Frame {
  start = clamp(Math.round(start), 0, state.dataLength - 1);
  end = clamp(Math.round(end), start + 1, state.dataLength);
  if (end - start > MAX_FRAME_SAMPLES) end = start + MAX_FRAME_SAMPLES;
  return { start, end };
}

/** Advance the selection as live samples arrive while following the stream. */
export function followLive(state: UiState, newLength: number): Frame {
  const wasAtEnd = state.selectedFrame.end >= state.dataLength;
  if (!wasAtEnd) return state.selectedFrame;
  const size = frameLength(state.selectedFrame);
  const grown = Math.min(size + (newLength - state.dataLength), MAX_FRAME_SAMPLES);
  return { start: newLength - grown, end: newLength };
}

export function toggleSensor(state: UiState, id: string): Set<string> {
  const next = new Set(state.visibleSensors);
  if (next.has(id)) next.delete(id);
  else next.add(id);
  return next;
}

/** Stroke width for a segment under the current thickness mode: toggling the
 * anomaly-score visualization off gives every segment the minimal width. */
export function strokeWidth(segmentThickness: number, thicknessOn: boolean, wMin = 1): number {
  return thicknessOn ? segmentThickness : wMin;
}

export function assertFrameValid(frame: Frame): void {
  if (frame.end - frame.start > MAX_FRAME_SAMPLES) {
    throw new Error(`frame of ${frame.end - frame.start} samples exceeds the cap`);
  }
  if (frame.start < 0 || frame.end <= frame.start) {
    throw new Error(`invalid frame [${frame.start}, ${frame.end})`);
  }
}
