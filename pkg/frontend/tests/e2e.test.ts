// End-to-end console checks against a real gateway (`pilot serve` spawned as
// a child process). Exercises exactly the surfaces the UI uses: turns,
// snapshots, the sensor trigger proxy, and the SSE stream. Skipped when the
// gateway CLI is not installed.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { GatewayClient } from "../src/api.js";
import {
  applyEvent,
  applySnapshots,
  applyTurnResult,
  detailChips,
  initialState,
  isBound,
  robotActionsSince,
  tableRow,
  type ConsoleState,
} from "../src/state.js";
import type { GatewayEvent } from "../src/types.js";

const NYC_PROMPT =
  "Hi Misty, I'd like to plan a day trip to New York City for tomorrow. " +
  "Please create an itinerary that allows me to enjoy the city and return to my hotel by 7:00 PM.";
const MULTI_BIND =
  "when I tap your chin, take a photo; press your forehead to say hi; " +
  "touch your right side to show sadness";
const PERIOD_MS = 300;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      server.close(() =>
        typeof address === "object" && address ? resolve(address.port) : reject(new Error("no port")),
      );
    });
  });
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

let child: ChildProcess | null = null;
let client: GatewayClient;
let available = false;

beforeAll(async () => {
  const port = await freePort();
  const dir = mkdtempSync(join(tmpdir(), "pilot-console-e2e-"));
  const configPath = join(dir, "config.json");
  writeFileSync(
    configPath,
    JSON.stringify({
      api_port: port,
      memory: { auto_store: true, path: join(dir, "memory.json") },
      scheduler: { period_ms: PERIOD_MS, path: join(dir, "table.json") },
    }),
  );
  try {
    child = spawn("pilot", ["serve", "--config", configPath, "--host", "127.0.0.1"], {
      stdio: "ignore",
    });
    child.on("error", () => {
      available = false;
    });
  } catch {
    return;
  }
  client = new GatewayClient(`http://127.0.0.1:${port}`);
  const deadline = Date.now() + 15_000;
  while (Date.now() < deadline) {
    try {
      const ready = await client.ready();
      if (ready.ready) {
        available = true;
        return;
      }
    } catch {
      await sleep(150);
    }
  }
}, 30_000);

afterAll(() => {
  child?.kill();
});

describe("console against a live gateway", () => {
  it("renders three detail chips for the day-trip instruction", async () => {
    if (!available) return; // gateway CLI not installed
    let state = initialState();
    const turn = await client.sendTurn("console", NYC_PROMPT);
    state = applyTurnResult(state, turn);
    expect(state.chat[0].turn?.route?.target).toBe("SIA");
    state = applySnapshots(state, { tsm: await client.tsm("console") });
    expect(detailChips(state)).toEqual([
      "Date tomorrow",
      "return by 7:00 PM",
      "goal enjoy the city",
    ]);
  }, 20_000);

  it("surfaces the bound skill's robot actions in the feed within 2s of a tap", async () => {
    if (!available) return;
    let state = initialState();
    const turn = await client.sendTurn("console", MULTI_BIND);
    expect(turn.commands?.map((c) => c.command)).toEqual(["BIND", "BIND", "BIND"]);
    state = applySnapshots(state, { table: await client.processTable() });
    expect(isBound(state, "chin")).toBe(true);

    const events: GatewayEvent[] = [];
    const stream = client.subscribeEvents((event) => events.push(event));
    await sleep(300); // let the subscription land
    const tappedAt = Date.now() / 1000 - 1;
    await client.tapSensor("chin");
    const deadline = Date.now() + 2_000;
    let sawAction = false;
    while (Date.now() < deadline && !sawAction) {
      for (const event of events.splice(0)) {
        [state] = applyEvent(state, event);
      }
      sawAction = robotActionsSince(state, tappedAt).some((entry) =>
        entry.detail.includes("capture_photo"),
      );
      if (!sawAction) await sleep(50);
    }
    stream.close();
    expect(sawAction).toBe(true);
  }, 20_000);

  it("flips a killed worker's row Inactive then Active without reload", async () => {
    if (!available) return;
    let state: ConsoleState = applySnapshots(initialState(), {
      table: await client.processTable(),
    });
    expect(tableRow(state, "chin")?.status).toBe("Active");

    const response = await fetch(`${client.baseUrl}/v1/debug/kill-worker/chin`, { method: "POST" });
    expect(response.ok).toBe(true);

    let sawInactive = false;
    let sawActiveAgain = false;
    const deadline = Date.now() + 4 * PERIOD_MS + 2_000;
    while (Date.now() < deadline && !(sawInactive && sawActiveAgain)) {
      state = applySnapshots(state, { table: await client.processTable() });
      const status = tableRow(state, "chin")?.status;
      if (status === "Inactive") sawInactive = true;
      else if (status === "Active" && sawInactive) sawActiveAgain = true;
      await sleep(40);
    }
    expect(sawInactive).toBe(true);
    expect(sawActiveAgain).toBe(true);
  }, 20_000);

  it("marks unbound sensors with a no-binding notice instead of faking actions", async () => {
    if (!available) return;
    const state = applySnapshots(initialState(), { table: await client.processTable() });
    expect(isBound(state, "bumper_rear_right")).toBe(false);
  });
});
