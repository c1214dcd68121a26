/** Client-side spiral geometry, mirroring the server's layout math exactly.
 *
 * Point positions are recomputed locally so hover spotlights track the cursor
 * at animation rate without re-requesting layouts; only segment/color data
 * comes from the server.
 */
import type { Frame } from "./types.js";

export interface SpiralGeometry {
  cycleSamples: number;
  rOuter: number;
  rHub: number;
  revolutionCap: number;
}

export const DEFAULT_GEOMETRY: Omit<SpiralGeometry, "cycleSamples"> = {
  rOuter: 100,
  rHub: 10,
  revolutionCap: 12,
};

export function ringSpacing(frame: Frame, geo: SpiralGeometry): number {
  const n = frame.end - frame.start;
  const revolutions = n > 1 ? Math.ceil((n - 1) / geo.cycleSamples) : 1;
  return (geo.rOuter - geo.rHub) / Math.max(geo.revolutionCap, revolutions);
}

/** Drawing coordinates of a sample; the most recent sample sits at 12 o'clock
 * on the outer radius and time advances clockwise. */
export function pointAt(t: number, frame: Frame, geo: SpiralGeometry): [number, number] {
  if (t < frame.start || t >= frame.end) {
    throw new RangeError(`sample ${t} outside frame [${frame.start}, ${frame.end})`);
  }
  const u = (frame.end - 1 - t) / geo.cycleSamples;
  const s = ringSpacing(frame, geo);
  const r = geo.rOuter - s * u;
  const beta = -2 * Math.PI * u;
  // the additions mirror the server's `center + offset` and normalize -0
  return [0 + r * Math.sin(beta), 0 - r * Math.cos(beta)];
}

/** Invert a cursor position to the nearest spiral timestep, analytically.
 * The cursor angle pins the fractional revolution; candidate rings are its
 * integer offsets, and the curve endpoints compete on actual distance. */
export function spotlightTimestep(
  cursor: [number, number],
  frame: Frame,
  geo: SpiralGeometry,
): number {
  const n = frame.end - frame.start;
  const [dx, dy] = cursor;
  const rho = Math.hypot(dx, dy);
  const twoPi = 2 * Math.PI;
  const betaC = ((Math.atan2(dx, -dy) % twoPi) + twoPi) % twoPi;
  const frac = (((-betaC / twoPi) % 1) + 1) % 1;
  const uMax = (n - 1) / geo.cycleSamples;
  const s = ringSpacing(frame, geo);

  const candidates: number[] = [frame.start, frame.end - 1];
  const count = Math.floor(uMax - frac + 1e-9) + 1;
  if (count >= 1) {
    let bestU = frac;
    let bestErr = Infinity;
    for (let j = 0; j < count; j++) {
      const u = frac + j;
      const err = Math.abs(rho - (geo.rOuter - s * u));
      if (err < bestErr) {
        bestErr = err;
        bestU = u;
      }
    }
    const t = Math.round(frame.end - 1 - bestU * geo.cycleSamples);
    candidates.push(Math.min(Math.max(t, frame.start), frame.end - 1));
  }
  let best = candidates[0];
  let bestDist = Infinity;
  for (const t of candidates) {
    const [px, py] = pointAt(t, frame, geo);
    const d = Math.hypot(px - dx, py - dy);
    if (d < bestDist) {
      bestDist = d;
      best = t;
    }
  }
  return best;
}
