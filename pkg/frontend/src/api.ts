// Thin gateway client: fetch wrappers plus an auto-reconnecting SSE reader.
// The console talks ONLY to the gateway API, never to the robot simulator.

import type {
  GatewayEvent,
  MemorySnapshotPayload,
  ProcessTableEntryPayload,
  TsmSnapshotPayload,
  TurnResultPayload,
} from "./types.js";

export class GatewayError extends Error {}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let message = `${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.error === "string") message = body.error;
    } catch {
      /* plain status is enough */
    }
    throw new GatewayError(message);
  }
  return (await response.json()) as T;
}

export interface EventStreamHandle {
  close(): void;
}

export class GatewayClient {
  constructor(readonly baseUrl: string, private fetchFn: typeof fetch = fetch) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async sendTurn(sessionId: string, text: string): Promise<TurnResultPayload> {
    const response = await this.fetchFn(this.url("/v1/turns"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, text }),
    });
    return asJson<TurnResultPayload>(response);
  }

  async tsm(sessionId: string): Promise<TsmSnapshotPayload> {
    return asJson(await this.fetchFn(this.url(`/v1/state/tsm/${sessionId}`)));
  }

  async processTable(): Promise<ProcessTableEntryPayload[]> {
    const body = await asJson<{ entries: ProcessTableEntryPayload[] }>(
      await this.fetchFn(this.url("/v1/state/process-table")),
    );
    return body.entries;
  }

  async memory(): Promise<MemorySnapshotPayload> {
    return asJson(await this.fetchFn(this.url("/v1/state/memory")));
  }

  async tapSensor(sensor: string): Promise<{ event_id: string }> {
    return asJson(
      await this.fetchFn(this.url(`/v1/sensors/${sensor}/trigger`), { method: "POST" }),
    );
  }

  async ready(): Promise<{ ready: boolean }> {
    return asJson(await this.fetchFn(this.url("/v1/ready")));
  }

  /**
   * Subscribe to the merged event stream with reconnect-on-drop backoff.
   * Implemented over fetch (works in browsers and node) rather than
   * EventSource so tests can drive it too.
   */
  subscribeEvents(
    onEvent: (event: GatewayEvent) => void,
    onStatus: (connected: boolean) => void = () => {},
    backoffMs = 500,
  ): EventStreamHandle {
    let closed = false;
    let attempt = 0;

    const run = async () => {
      while (!closed) {
        try {
          const response = await this.fetchFn(this.url("/v1/events"), {
            headers: { accept: "text/event-stream" },
          });
          if (!response.ok || !response.body) throw new GatewayError(`${response.status}`);
          onStatus(true);
          attempt = 0;
          const reader = response.body.getReader();
          const decoder = new TextDecoder();
          let buffer = "";
          while (!closed) {
            const { done, value } = await reader.read();
            if (done) break;
            buffer += decoder.decode(value, { stream: true });
            let index;
            while ((index = buffer.indexOf("\n")) >= 0) {
              const line = buffer.slice(0, index).trimEnd();
              buffer = buffer.slice(index + 1);
              if (line.startsWith("data: ")) {
                try {
                  onEvent(JSON.parse(line.slice(6)) as GatewayEvent);
                } catch {
                  /* skip malformed frame */
                }
              }
            }
          }
          reader.cancel().catch(() => {});
        } catch {
          /* fall through to reconnect */
        }
        onStatus(false);
        if (closed) return;
        attempt += 1;
        const delay = Math.min(backoffMs * 2 ** Math.min(attempt, 5), 10_000);
        await new Promise((resolve) => setTimeout(resolve, delay));
      }
    };
    void run();
    return {
      close() {
        closed = true;
      },
    };
  }
}
