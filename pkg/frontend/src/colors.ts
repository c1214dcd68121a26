/** Color tables and highlight constants.
 *
 * The 256-entry tables are interpolated from the same anchors the server
 * ships as CSV, so a colorIndex renders identically on both sides. Category
 * highlights are fixed colors outside both colormaps' gamut extremes.
 */

export const HIGHLIGHT_II = "#E6C700";
export const HIGHLIGHT_III = "#D40000";

const PARULA_ANCHORS: [number, number, number][] = [
  [53, 42, 135],
  [15, 92, 221],
  [20, 129, 214],
  [6, 164, 202],
  [46, 183, 164],
  [135, 191, 119],
  [209, 187, 89],
  [254, 200, 50],
  [249, 251, 14],
];

function interpolate(anchors: [number, number, number][]): string[] {
  const out: string[] = [];
  for (let i = 0; i < 256; i++) {
    const x = (i / 255) * (anchors.length - 1);
    const lo = Math.min(Math.floor(x), anchors.length - 2);
    const f = x - lo;
    const rgb = [0, 1, 2].map((c) =>
      Math.round(anchors[lo][c] + f * (anchors[lo + 1][c] - anchors[lo][c])),
    );
    out.push(`rgb(${rgb[0]},${rgb[1]},${rgb[2]})`);
  }
  return out;
}

function jet(): string[] {
  const out: string[] = [];
  for (let i = 0; i < 256; i++) {
    const v = i / 255;
    const ch = (x: number) => Math.round(255 * Math.min(Math.max(1.5 - Math.abs(x), 0), 1));
    out.push(`rgb(${ch(4 * v - 3)},${ch(4 * v - 2)},${ch(4 * v - 1)})`);
  }
  return out;
}

const TABLES: Record<string, string[]> = {
  parula: interpolate(PARULA_ANCHORS),
  jet: jet(),
};

export function color(map: "parula" | "jet", index: number): string {
  return TABLES[map][Math.min(Math.max(index, 0), 255)];
}

export function gradientStops(map: "parula" | "jet", count = 16): string[] {
  const table = TABLES[map];
  return Array.from({ length: count }, (_, i) =>
    table[Math.round((i / (count - 1)) * 255)],
  );
}
