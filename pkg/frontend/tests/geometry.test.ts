import { describe, expect, it } from "vitest";

import { pointAt, ringSpacing, spotlightTimestep, type SpiralGeometry } from "../src/geometry.js";
import fixtures from "./fixtures/geometry.json";

interface Fixture {
  frame: { start: number; end: number };
  cycleSamples: number;
  ringSpacing: number;
  rOuter: number;
  rHub: number;
  revolutionCap: number;
  samplePoints: [number, number, number][];
  spotlightCases: { cursor: [number, number]; t: number }[];
}

const cases = fixtures as Fixture[];

function geo(f: Fixture): SpiralGeometry {
  return {
    cycleSamples: f.cycleSamples,
    rOuter: f.rOuter,
    rHub: f.rHub,
    revolutionCap: f.revolutionCap,
  };
}

describe("client geometry mirrors the server", () => {
  it("matches ring spacing exactly", () => {
    for (const f of cases) {
      expect(ringSpacing(f.frame, geo(f))).toBeCloseTo(f.ringSpacing, 10);
    }
  });

  it("matches server point positions", () => {
    for (const f of cases) {
      for (const [t, x, y] of f.samplePoints) {
        const [cx, cy] = pointAt(t, f.frame, geo(f));
        expect(Math.hypot(cx - x, cy - y)).toBeLessThan(1e-9);
      }
    }
  });

  it("pins the most recent sample at 12 o'clock on the outer radius", () => {
    for (const f of cases) {
      const [x, y] = pointAt(f.frame.end - 1, f.frame, geo(f));
      expect(x).toBe(0);
      expect(y).toBe(-f.rOuter);
    }
  });

  it("agrees with the server spotlight within one sample", () => {
    for (const f of cases) {
      for (const { cursor, t } of f.spotlightCases) {
        const got = spotlightTimestep(cursor, f.frame, geo(f));
        expect(Math.abs(got - t)).toBeLessThanOrEqual(1);
      }
    }
  });

  it("roundtrips its own points exactly", () => {
    for (const f of cases) {
      const step = Math.max(1, Math.floor((f.frame.end - f.frame.start) / 500));
      for (let t = f.frame.start; t < f.frame.end; t += step) {
        expect(spotlightTimestep(pointAt(t, f.frame, geo(f)), f.frame, geo(f))).toBe(t);
      }
    }
  });

  it("rejects samples outside the frame", () => {
    const f = cases[0];
    expect(() => pointAt(f.frame.end, f.frame, geo(f))).toThrow(RangeError);
  });
});
