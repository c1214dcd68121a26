/** Bootstraps the triage UI: time slider, spiral chart, options, live mode. */
import { ApiClient } from "./api.js";
import { OptionsMenu } from "./options.js";
import { SpiralChart } from "./spiralchart.js";
import {
  fitToRegion,
  followLive,
  initialState,
  toggleSensor,
  type UiState,
} from "./state.js";
import { TimeSlider } from "./timeslider.js";
import type { Frame, LiveEvent, Overview, Region, SensorInfo } from "./types.js";

const api = new ApiClient();

async function boot(): Promise<void> {
  const rootSlider = document.getElementById("timeslider")!;
  const rootChart = document.getElementById("spirals")!;
  const rootOptions = document.getElementById("options")!;

  let catalog: SensorInfo[];
  let overview: Overview;
  try {
    [catalog, overview] = await Promise.all([api.sensors(), api.overview()]);
  } catch (err) {
    rootChart.textContent = `service unavailable: ${err}`;
    return;
  }

  let state: UiState = initialState(overview.length, catalog.map((s) => s.id));
  let stopLive: (() => void) | null = null;

  const chart = new SpiralChart(rootChart, catalog, {
    onPeriodOverride(sensorId, period) {
      state.perSensorPeriod.set(sensorId, period);
      void refreshSpiral(sensorId);
    },
    onHoverTimestep(t) {
      state.hoveredTimestep = t;
      chart.setSpotlight(t);
    },
  });

  const slider = new TimeSlider(rootSlider, state, {
    onFrame(frame: Frame) {
      state.selectedFrame = frame;
      // a new frame invalidates period estimates, not manual overrides
      slider.update(state, overview);
      void refreshAll();
    },
    onRegionClick(region: Region) {
      const fit = fitToRegion(state, region);
      state.selectedFrame = fit.selectedFrame;
      state.visibleSensors = fit.visibleSensors;
      syncVisibleSensors();
      slider.update(state, overview);
      void refreshAll();
    },
  });

  new OptionsMenu(rootOptions, catalog, state, {
    onColormap(map) {
      state.colormap = map;
      void refreshAll();
    },
    onRange(range) {
      state.range = range;
      void refreshAll();
    },
    onThickness(on) {
      state.thicknessOn = on;
      void refreshAll();
    },
    onTheme(theme) {
      state.theme = theme;
      document.body.dataset.theme = theme;
    },
    onLive(on) {
      state.liveMode = on;
      if (on && !stopLive) stopLive = api.live(onLiveBatch);
      if (!on && stopLive) {
        stopLive();
        stopLive = null;
      }
    },
    onSensorToggle(id) {
      state.visibleSensors = toggleSensor(state, id);
      syncVisibleSensors();
      if (state.visibleSensors.has(id)) void refreshSpiral(id);
    },
  });

  function syncVisibleSensors(): void {
    for (const id of chart.sensorIds()) {
      if (!state.visibleSensors.has(id)) chart.removeSensor(id);
    }
  }

  async function refreshSpiral(sensorId: string): Promise<void> {
    const layout = await api.spiral(sensorId, state.selectedFrame, {
      period: state.perSensorPeriod.get(sensorId),
      map: state.colormap,
      range: state.range,
      thickness: state.thicknessOn ? "on" : "off",
    });
    chart.setLayout(sensorId, layout, state);
  }

  async function refreshAll(): Promise<void> {
    await Promise.all([...state.visibleSensors].map((id) => refreshSpiral(id)));
  }

  let liveRefreshDue = 0;
  function onLiveBatch(events: LiveEvent[]): void {
    const newLength = Math.max(...events.map((e) => e.t + 1), overview.length);
    state.selectedFrame = followLive(state, newLength);
    state.dataLength = overview.length = newLength;
    slider.update(state, overview);
    const now = performance.now();
    if (now >= liveRefreshDue) {
      liveRefreshDue = now + 1000; // layout refetch at most once a second
      void refreshAll();
      void api.overview().then((ov) => {
        overview = ov;
        slider.update(state, overview);
      });
    }
  }

  slider.update(state, overview);
  await refreshAll();
}

void boot();
