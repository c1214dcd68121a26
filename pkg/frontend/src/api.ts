/** Typed client for the triage service. Every windowed request passes the cap
 * guard, so the UI can never issue an oversized query. */
import { assertFrameValid } from "./state.js";
import type { Frame, LiveEvent, Overview, SensorInfo, SpiralLayout, WindowData } from "./types.js";

export type FetchLike = (url: string) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export interface SpiralParams {
  period?: number;
  epsilon?: number;
  k?: number;
  range?: "global" | "local";
  map?: "parula" | "jet";
  thickness?: "on" | "off";
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  readonly issued: string[] = [];

  private async get<T>(path: string): Promise<T> {
    const url = `${this.base}${path}`;
    this.issued.push(url);
    const resp = await this.fetchFn(url);
    if (!resp.ok) {
      const body = (await resp.json().catch(() => ({}))) as { error?: string };
      throw new Error(body.error ?? `request failed with ${resp.status}`);
    }
    return (await resp.json()) as T;
  }

  sensors(): Promise<SensorInfo[]> {
    return this.get("/api/sensors");
  }

  overview(): Promise<Overview> {
    return this.get("/api/overview");
  }

  async window(frame: Frame, sensorIds?: string[]): Promise<WindowData> {
    assertFrameValid(frame);
    const sensors = sensorIds?.length ? `&sensors=${sensorIds.join(",")}` : "";
    return this.get(`/api/window?from=${frame.start}&to=${frame.end}${sensors}`);
  }

  async spiral(sensorId: string, frame: Frame, params: SpiralParams = {}): Promise<SpiralLayout> {
    assertFrameValid(frame);
    const extra = Object.entries(params)
      .filter(([, v]) => v !== undefined)
      .map(([k, v]) => `&${k}=${encodeURIComponent(String(v))}`)
      .join("");
    return this.get(
      `/api/spiral?sensor=${encodeURIComponent(sensorId)}&from=${frame.start}&to=${frame.end}${extra}`,
    );
  }

  /** Subscribe to the live stream; returns a disposer. Events are queued and
   * flushed through the callback once per animation frame. */
  live(onBatch: (events: LiveEvent[]) => void): () => void {
    const source = new EventSource(`${this.base}/api/live`);
    let queue: LiveEvent[] = [];
    let scheduled = false;
    const flush = () => {
      scheduled = false;
      if (queue.length) {
        const batch = queue;
        queue = [];
        onBatch(batch);
      }
    };
    source.onmessage = (msg) => {
      queue.push(JSON.parse(msg.data) as LiveEvent);
      if (!scheduled) {
        scheduled = true;
        requestAnimationFrame(flush);
      }
    };
    return () => source.close();
  }
}
