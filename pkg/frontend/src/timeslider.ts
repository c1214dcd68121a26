/** Time slider [A]: overview of the whole dataset with anomaly markers, the
 * draggable frame selection, arrow shifting, and direct index entry. */
import { HIGHLIGHT_II, HIGHLIGHT_III } from "./colors.js";
import { dragBorder, enterFrame, fitToRegion, shiftFrame, type UiState } from "./state.js";
import type { Frame, Overview, Region } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 1000;
const HEIGHT = 46;
const TRACK_Y = 18;
const TRACK_H = 16;

export interface TimeSliderCallbacks {
  onFrame(frame: Frame): void;
  onRegionClick(region: Region): void;
}

export class TimeSlider {
  private svg: SVGSVGElement;
  private selection!: SVGRectElement;
  private handles!: [SVGRectElement, SVGRectElement];
  private fromInput: HTMLInputElement;
  private toInput: HTMLInputElement;
  private dragging: "start" | "end" | null = null;
  private overview: Overview = { length: 1, regions: [] };

  constructor(
    private root: HTMLElement,
    private state: UiState,
    private callbacks: TimeSliderCallbacks,
  ) {
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    this.svg.classList.add("timeslider");

    const bar = document.createElement("div");
    bar.className = "timeslider-bar";
    const left = this.arrowButton("←", -1);
    const right = this.arrowButton("→", 1);
    bar.append(left, this.svg, right);
    root.append(bar);

    const entry = document.createElement("div");
    entry.className = "frame-entry";
    this.fromInput = document.createElement("input");
    this.toInput = document.createElement("input");
    for (const inp of [this.fromInput, this.toInput]) {
      inp.type = "number";
      inp.min = "0";
    }
    const apply = document.createElement("button");
    apply.textContent = "go";
    apply.addEventListener("click", () => {
      const frame = enterFrame(this.state, Number(this.fromInput.value), Number(this.toInput.value));
      this.callbacks.onFrame(frame);
    });
    entry.append("frame ", this.fromInput, " – ", this.toInput, apply);
    root.append(entry);

    this.svg.addEventListener("pointerdown", (ev) => this.onPointerDown(ev));
    window.addEventListener("pointermove", (ev) => this.onPointerMove(ev));
    window.addEventListener("pointerup", () => (this.dragging = null));
  }

  private arrowButton(label: string, direction: -1 | 1): HTMLButtonElement {
    const btn = document.createElement("button");
    btn.textContent = label;
    btn.title = "shift the selection by its own length";
    btn.addEventListener("click", () => this.callbacks.onFrame(shiftFrame(this.state, direction)));
    return btn;
  }

  private xOf(sample: number): number {
    return (sample / Math.max(this.overview.length, 1)) * WIDTH;
  }

  private sampleOf(clientX: number): number {
    const rect = this.svg.getBoundingClientRect();
    const frac = (clientX - rect.left) / rect.width;
    return frac * this.overview.length;
  }

  private onPointerDown(ev: PointerEvent): void {
    const sample = this.sampleOf(ev.clientX);
    const { start, end } = this.state.selectedFrame;
    const dStart = Math.abs(sample - start);
    const dEnd = Math.abs(sample - end);
    this.dragging = dStart <= dEnd ? "start" : "end";
    this.callbacks.onFrame(dragBorder(this.state, this.dragging, sample));
  }

  private onPointerMove(ev: PointerEvent): void {
    if (!this.dragging) return;
    this.callbacks.onFrame(dragBorder(this.state, this.dragging, this.sampleOf(ev.clientX)));
  }

  update(state: UiState, overview: Overview): void {
    this.state = state;
    this.overview = overview;
    this.svg.replaceChildren();

    const track = document.createElementNS(SVG_NS, "rect");
    track.setAttribute("x", "0");
    track.setAttribute("y", String(TRACK_Y));
    track.setAttribute("width", String(WIDTH));
    track.setAttribute("height", String(TRACK_H));
    track.classList.add("track");
    this.svg.append(track);

    for (const region of overview.regions) {
      const x = this.xOf(region.frame.start);
      const w = Math.max(this.xOf(region.frame.end) - x, 2);
      const fill = region.severity === "III" ? HIGHLIGHT_III : HIGHLIGHT_II;
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(x));
      rect.setAttribute("y", String(TRACK_Y));
      rect.setAttribute("width", String(w));
      rect.setAttribute("height", String(TRACK_H));
      rect.setAttribute("fill", fill);
      this.svg.append(rect);

      const glyph = document.createElementNS(SVG_NS, "text");
      glyph.textContent = region.severity === "III" ? "!" : "?";
      glyph.setAttribute("x", String(x + w / 2));
      glyph.setAttribute("y", String(TRACK_Y - 4));
      glyph.setAttribute("fill", fill);
      glyph.classList.add("region-glyph");
      glyph.addEventListener("pointerdown", (ev) => {
        ev.stopPropagation();
        this.callbacks.onRegionClick(region);
      });
      this.svg.append(glyph);
    }

    this.selection = document.createElementNS(SVG_NS, "rect");
    const selX = this.xOf(state.selectedFrame.start);
    const selW = Math.max(this.xOf(state.selectedFrame.end) - selX, 1);
    this.selection.setAttribute("x", String(selX));
    this.selection.setAttribute("y", String(TRACK_Y - 2));
    this.selection.setAttribute("width", String(selW));
    this.selection.setAttribute("height", String(TRACK_H + 4));
    this.selection.classList.add("selection");
    this.svg.append(this.selection);

    this.handles = [0, 1].map((i) => {
      const h = document.createElementNS(SVG_NS, "rect");
      h.setAttribute("x", String((i === 0 ? selX : selX + selW) - 2));
      h.setAttribute("y", String(TRACK_Y - 4));
      h.setAttribute("width", "4");
      h.setAttribute("height", String(TRACK_H + 8));
      h.classList.add("handle");
      this.svg.append(h);
      return h;
    }) as [SVGRectElement, SVGRectElement];

    this.fromInput.value = String(state.selectedFrame.start);
    this.toInput.value = String(state.selectedFrame.end);
  }
}
