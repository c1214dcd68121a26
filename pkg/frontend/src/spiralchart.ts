/** Spiral chart [B]: one spiral per visible sensor, linked spotlights, center
 * glyphs with hover highlighting, per-spiral cycle-length sliders. */
import { color, gradientStops, HIGHLIGHT_II, HIGHLIGHT_III } from "./colors.js";
import { DEFAULT_GEOMETRY, pointAt, spotlightTimestep, type SpiralGeometry } from "./geometry.js";
import { strokeWidth, type UiState } from "./state.js";
import type { SensorInfo, SpiralLayout } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const VIEW = 115;

export interface SpiralChartCallbacks {
  onPeriodOverride(sensorId: string, period: number): void;
  onHoverTimestep(t: number | null): void;
}

interface Card {
  wrap: HTMLDivElement;
  svg: SVGSVGElement;
  group: SVGGElement;
  spotlight: SVGCircleElement;
  slider: HTMLInputElement;
  sliderWrap: HTMLDivElement;
  layout?: SpiralLayout;
  highlighted: boolean;
  animFrom: number;
}

export class SpiralChart {
  private cards = new Map<string, Card>();
  private legend: HTMLDivElement;
  private animHandle: number | null = null;

  constructor(
    private root: HTMLElement,
    private catalog: SensorInfo[],
    private callbacks: SpiralChartCallbacks,
  ) {
    this.legend = document.createElement("div");
    this.legend.className = "legend hidden";
    root.append(this.legend);
  }

  private geometryOf(layout: SpiralLayout): SpiralGeometry {
    return { cycleSamples: layout.cycleSamples, ...DEFAULT_GEOMETRY };
  }

  private makeCard(sensorId: string): Card {
    const wrap = document.createElement("div");
    wrap.className = "spiral-card";
    const title = document.createElement("div");
    title.className = "spiral-title";
    title.textContent = sensorId;
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `${-VIEW} ${-VIEW} ${2 * VIEW} ${2 * VIEW}`);
    const group = document.createElementNS(SVG_NS, "g");
    const spotlight = document.createElementNS(SVG_NS, "circle");
    spotlight.classList.add("spotlight", "hidden");
    spotlight.setAttribute("r", "7");
    group.append(spotlight); // first child: always behind the curve
    svg.append(group);

    const sliderWrap = document.createElement("div");
    sliderWrap.className = "period-slider hidden";
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "4";
    slider.step = "1";
    const readout = document.createElement("span");
    sliderWrap.append("cycle ", slider, readout);
    slider.addEventListener("input", () => {
      readout.textContent = ` ${slider.value}`;
      this.callbacks.onPeriodOverride(sensorId, Number(slider.value));
    });

    svg.addEventListener("click", (ev) => {
      if ((ev.target as Element).classList.contains("center-glyph")) return;
      sliderWrap.classList.toggle("hidden");
    });
    svg.addEventListener("pointermove", (ev) => this.onHover(sensorId, ev));
    svg.addEventListener("pointerleave", () => {
      this.callbacks.onHoverTimestep(null);
      this.legend.classList.add("hidden");
    });

    wrap.append(title, svg, sliderWrap);
    this.root.append(wrap);
    const card: Card = { wrap, svg, group, spotlight, slider, sliderWrap, highlighted: false, animFrom: 0 };
    this.cards.set(sensorId, card);
    return card;
  }

  private onHover(sensorId: string, ev: PointerEvent): void {
    const card = this.cards.get(sensorId);
    if (!card?.layout) return;
    const rect = card.svg.getBoundingClientRect();
    const x = ((ev.clientX - rect.left) / rect.width) * 2 * VIEW - VIEW;
    const y = ((ev.clientY - rect.top) / rect.height) * 2 * VIEW - VIEW;
    const t = spotlightTimestep([x, y], card.layout.frame, this.geometryOf(card.layout));
    this.callbacks.onHoverTimestep(t);
    this.showLegend(sensorId);
  }

  private showLegend(sensorId: string): void {
    const info = this.catalog.find((s) => s.id === sensorId);
    const card = this.cards.get(sensorId);
    if (!info || !card?.layout) return;
    const mapName = (card.wrap.dataset.map ?? "parula") as "parula" | "jet";
    const stops = gradientStops(mapName).join(",");
    this.legend.classList.remove("hidden");
    this.legend.innerHTML =
      `<span>${info.id} [${info.unit || "-"}]</span>` +
      `<div class="legend-bar" style="background:linear-gradient(90deg,${stops})"></div>` +
      `<span>${info.globalMin.toPrecision(4)} – ${info.globalMax.toPrecision(4)}</span>`;
  }

  /** Move every spiral's spotlight to the same timestep (linked views). */
  setSpotlight(t: number | null): void {
    for (const card of this.cards.values()) {
      if (!card.layout) continue;
      const { frame } = card.layout;
      if (t === null || t < frame.start || t >= frame.end) {
        card.spotlight.classList.add("hidden");
        continue;
      }
      const [px, py] = pointAt(t, frame, this.geometryOf(card.layout));
      card.spotlight.setAttribute("cx", px.toFixed(2));
      card.spotlight.setAttribute("cy", py.toFixed(2));
      card.spotlight.classList.remove("hidden");
    }
  }

  /** Render (or re-render) one sensor's spiral from a server layout. */
  setLayout(sensorId: string, layout: SpiralLayout, state: UiState): void {
    const card = this.cards.get(sensorId) ?? this.makeCard(sensorId);
    card.layout = layout;
    card.wrap.dataset.map = state.colormap;
    const frameLen = layout.frame.end - layout.frame.start;
    card.slider.max = String(Math.max(8, Math.floor(frameLen / 2)));
    if (!card.slider.value || Math.abs(Number(card.slider.value) - layout.cycleSamples) > 0.5) {
      card.slider.value = String(Math.round(layout.cycleSamples));
    }

    card.group.querySelectorAll("path,circle.marker,text.center-glyph").forEach((el) => el.remove());

    for (const seg of layout.segments) {
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute(
        "d",
        seg.polyline.length === 1
          ? `M ${seg.polyline[0][0]},${seg.polyline[0][1]}`
          : "M " + seg.polyline.map(([x, y]) => `${x},${y}`).join(" L "),
      );
      path.setAttribute("fill", "none");
      path.setAttribute("stroke", color(state.colormap, seg.colorIndex));
      path.setAttribute("stroke-width", String(strokeWidth(seg.thickness, state.thicknessOn)));
      path.setAttribute("stroke-linecap", "round");
      path.dataset.category = seg.category;
      path.dataset.width = String(strokeWidth(seg.thickness, state.thicknessOn));
      path.dataset.color = color(state.colormap, seg.colorIndex);
      card.group.append(path);
    }

    const marker = document.createElementNS(SVG_NS, "circle");
    marker.classList.add("marker");
    marker.setAttribute("cx", String(layout.endMarker.x));
    marker.setAttribute("cy", String(layout.endMarker.y));
    marker.setAttribute("r", "4");
    marker.setAttribute("fill", color(state.colormap, layout.endMarker.colorIndex));
    card.group.append(marker);

    const worst = layout.segments.reduce(
      (acc, s) => (s.category === "III" ? "III" : s.category === "II" && acc !== "III" ? "II" : acc),
      "I" as "I" | "II" | "III",
    );
    if (worst !== "I") {
      const glyph = document.createElementNS(SVG_NS, "text");
      glyph.classList.add("center-glyph");
      glyph.textContent = worst === "III" ? "!" : "?";
      glyph.setAttribute("fill", worst === "III" ? HIGHLIGHT_III : HIGHLIGHT_II);
      glyph.setAttribute("text-anchor", "middle");
      glyph.setAttribute("dominant-baseline", "central");
      glyph.addEventListener("pointerenter", () => this.setHighlight(sensorId, true));
      glyph.addEventListener("pointerleave", () => this.setHighlight(sensorId, false));
      card.group.append(glyph);
    }
  }

  /** Hovering the center glyph recolors II/III segments and pulses widths. */
  private setHighlight(sensorId: string, on: boolean): void {
    const card = this.cards.get(sensorId);
    if (!card) return;
    card.highlighted = on;
    card.animFrom = performance.now();
    for (const path of card.group.querySelectorAll("path")) {
      const cat = path.dataset.category;
      if (on && (cat === "II" || cat === "III")) {
        path.setAttribute("stroke", cat === "III" ? HIGHLIGHT_III : HIGHLIGHT_II);
      } else {
        path.setAttribute("stroke", path.dataset.color ?? "#888");
        path.setAttribute("stroke-width", path.dataset.width ?? "1");
      }
    }
    if (on && this.animHandle === null) this.animate();
    if (!on && ![...this.cards.values()].some((c) => c.highlighted) && this.animHandle !== null) {
      cancelAnimationFrame(this.animHandle);
      this.animHandle = null;
    }
  }

  private animate = (): void => {
    this.animHandle = requestAnimationFrame(this.animate);
    const now = performance.now();
    for (const card of this.cards.values()) {
      if (!card.highlighted) continue;
      // sinusoidal +-30% width pulse at 1 Hz draws the eye to highlights
      const scale = 1 + 0.3 * Math.sin((2 * Math.PI * (now - card.animFrom)) / 1000);
      for (const path of card.group.querySelectorAll("path")) {
        const cat = path.dataset.category;
        if (cat === "II" || cat === "III") {
          path.setAttribute("stroke-width", String(Number(path.dataset.width) * scale));
        }
      }
    }
  };

  removeSensor(sensorId: string): void {
    this.cards.get(sensorId)?.wrap.remove();
    this.cards.delete(sensorId);
  }

  has(sensorId: string): boolean {
    return this.cards.has(sensorId);
  }

  sensorIds(): string[] {
    return [...this.cards.keys()];
  }
}
