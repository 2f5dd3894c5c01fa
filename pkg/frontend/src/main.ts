import { GatewayClient } from "./api.js";
import { render } from "./render.js";
import type { RenderTargets } from "./render.js";
import {
  applyEvent,
  applyNotice,
  applySnapshots,
  applyTurnResult,
  applyUserMessage,
  initialState,
  isBound,
  setConnected,
} from "./state.js";

const params = new URLSearchParams(location.search);
const gatewayUrl = params.get("gateway") ?? `${location.protocol}//${location.hostname}:8750`;
const sessionId = params.get("session") ?? "console";

const client = new GatewayClient(gatewayUrl);
let state = initialState();

const targets: RenderTargets = {
  chat: document.getElementById("chat")!,
  sensors: document.getElementById("sensors")!,
  table: document.getElementById("process-table")!,
  tsm: document.getElementById("tsm")!,
  memory: document.getElementById("memory")!,
  feed: document.getElementById("feed")!,
  connection: document.getElementById("connection")!,
  send: document.getElementById("send") as HTMLButtonElement,
  input: document.getElementById("input") as HTMLInputElement,
};

function draw(): void {
  render(state, targets, (sensor) => void tapSensor(sensor));
}

async function refreshSnapshots(): Promise<void> {
  try {
    const [tsm, table, memory] = await Promise.all([
      client.tsm(sessionId),
      client.processTable(),
      client.memory(),
    ]);
    state = applySnapshots(state, { tsm, table, memory });
  } catch {
    /* gateway briefly unavailable; the stream status already shows it */
  }
  draw();
}

async function sendTurn(): Promise<void> {
  const text = targets.input.value.trim();
  if (!text) return;
  state = applyUserMessage(state, text);
  draw();
  try {
    const turn = await client.sendTurn(sessionId, text);
    state = applyTurnResult(state, turn);
    targets.input.value = "";
  } catch (error) {
    // keep the input so the user can edit and resend
    state = applyNotice(state, `send failed: ${(error as Error).message}`);
  }
  await refreshSnapshots();
}

async function tapSensor(sensor: string): Promise<void> {
  if (!isBound(state, sensor)) {
    state = applyNotice(state, `${sensor}: no binding`);
    draw();
  }
  try {
    await client.tapSensor(sensor);
  } catch (error) {
    state = applyNotice(state, `trigger failed: ${(error as Error).message}`);
    draw();
  }
}

targets.send.addEventListener("click", () => void sendTurn());
targets.input.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void sendTurn();
});
targets.input.addEventListener("input", draw);

client.subscribeEvents(
  (event) => {
    const [next, refreshTable] = applyEvent(state, event);
    state = next;
    if (refreshTable) void refreshSnapshots();
    else draw();
  },
  (connected) => {
    state = setConnected(state, connected);
    draw();
  },
);

// Supervision flips must appear without reload even if an event frame is
// missed: poll the table every second as a safety net.
setInterval(() => void refreshSnapshots(), 1000);

void refreshSnapshots();
draw();
