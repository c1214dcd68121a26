/** Options menu [C]: hidden by default; visualization options and sensor
 * include/exclude switches. */
import type { UiState } from "./state.js";
import type { SensorInfo } from "./types.js";

export interface OptionsCallbacks {
  onColormap(map: "parula" | "jet"): void;
  onRange(range: "global" | "local"): void;
  onThickness(on: boolean): void;
  onTheme(theme: "light" | "dark"): void;
  onLive(on: boolean): void;
  onSensorToggle(id: string): void;
}

export class OptionsMenu {
  private panel: HTMLDivElement;

  constructor(root: HTMLElement, catalog: SensorInfo[], state: UiState, cb: OptionsCallbacks) {
    const button = document.createElement("button");
    button.className = "options-toggle";
    button.textContent = "⚙ options";
    this.panel = document.createElement("div");
    this.panel.className = "options-panel hidden";
    button.addEventListener("click", () => this.panel.classList.toggle("hidden"));
    root.append(button, this.panel);

    this.panel.append(
      this.select("colormap", ["parula", "jet"], state.colormap, (v) =>
        cb.onColormap(v as "parula" | "jet"),
      ),
      this.select("color range", ["global", "local"], state.range, (v) =>
        cb.onRange(v as "global" | "local"),
      ),
      this.checkbox("anomaly score as thickness", state.thicknessOn, cb.onThickness),
      this.select("theme", ["light", "dark"], state.theme, (v) => cb.onTheme(v as "light" | "dark")),
      this.checkbox("live mode", state.liveMode, cb.onLive),
    );

    const sensors = document.createElement("div");
    sensors.className = "sensor-list";
    sensors.append("sensors: ");
    for (const info of catalog) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = state.visibleSensors.has(info.id);
      box.addEventListener("change", () => cb.onSensorToggle(info.id));
      label.append(box, info.id);
      sensors.append(label);
    }
    this.panel.append(sensors);
  }

  private select(
    label: string,
    choices: string[],
    current: string,
    onChange: (v: string) => void,
  ): HTMLLabelElement {
    const wrap = document.createElement("label");
    const sel = document.createElement("select");
    for (const c of choices) {
      const opt = document.createElement("option");
      opt.value = c;
      opt.textContent = c;
      opt.selected = c === current;
      sel.append(opt);
    }
    sel.addEventListener("change", () => onChange(sel.value));
    wrap.append(`${label}: `, sel);
    return wrap;
  }

  private checkbox(label: string, checked: boolean, onChange: (v: boolean) => void): HTMLLabelElement {
    const wrap = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = checked;
    box.addEventListener("change", () => onChange(box.checked));
    wrap.append(box, ` ${label}`);
    return wrap;
  }
}
