// DOM rendering: draws the current ConsoleState. No business logic here.

import { emotionColor } from "./colors.js";
import type { ConsoleState } from "./state.js";
import { detailChips, isBound } from "./state.js";
import { ALL_SENSORS } from "./types.js";

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function renderChat(state: ConsoleState, root: HTMLElement): void {
  root.replaceChildren();
  for (const entry of state.chat) {
    if (entry.kind === "user") {
      root.append(el("div", "msg user", entry.text));
      continue;
    }
    if (entry.kind === "error") {
      root.append(el("div", "msg error", entry.text));
      continue;
    }
    const turn = entry.turn!;
    const wrap = el("div", "msg turn");
    const header = el("div", "turn-header");
    if (turn.route) header.append(el("span", `badge route-${turn.route.target.toLowerCase()}`, turn.route.target));
    if (turn.path) header.append(el("span", `badge path-${turn.path}`, turn.path === "fast" ? "fast path" : turn.path === "slow" ? "slow path" : "control"));
    header.append(el("span", "latency", `${turn.latency_ms.toFixed(0)} ms`));
    wrap.append(header);
    if (turn.script) {
      for (const utterance of turn.script.utterances) {
        const line = el("div", "utterance");
        const chip = el("span", "chip", utterance.emotion);
        chip.style.background = emotionColor(utterance.emotion);
        line.append(chip, el("span", "rate", `x${utterance.rate.toFixed(2)}`), el("span", "text", utterance.text));
        wrap.append(line);
      }
    }
    if (turn.commands) {
      for (const command of turn.commands) {
        const summary = [command.command, command.sensor, command.skill].filter(Boolean).join(" ");
        const line = el("div", `command ${command.outcome}`, `${summary} -> ${command.outcome}${command.detail ? ` (${command.detail})` : ""}`);
        wrap.append(line);
      }
    }
    root.append(wrap);
  }
  root.scrollTop = root.scrollHeight;
}

function renderSensors(state: ConsoleState, root: HTMLElement, onTap: (sensor: string) => void): void {
  if (!root.childElementCount) {
    for (const sensor of ALL_SENSORS) {
      const button = el("button", "sensor", sensor) as HTMLButtonElement;
      button.dataset.sensor = sensor;
      button.addEventListener("click", () => onTap(sensor));
      root.append(button);
    }
  }
  for (const button of Array.from(root.children) as HTMLElement[]) {
    button.classList.toggle("bound", isBound(state, button.dataset.sensor!));
  }
}

function renderTable(state: ConsoleState, root: HTMLElement): void {
  root.replaceChildren();
  if (!state.table.length) {
    root.append(el("div", "empty", "no bindings"));
    return;
  }
  for (const entry of state.table) {
    const row = el("div", `row status-${entry.status.toLowerCase()}`);
    row.dataset.sensor = entry.sensor;
    row.append(
      el("span", "cell sensor", entry.sensor),
      el("span", "cell worker", entry.worker_id),
      el("span", "cell skill", entry.skill),
      el("span", "cell status", entry.status),
    );
    root.append(row);
  }
}

function renderTsm(state: ConsoleState, root: HTMLElement): void {
  root.replaceChildren();
  const task = state.tsm?.state;
  if (!task) {
    root.append(el("div", "empty", "no active task"));
    return;
  }
  root.append(el("div", "main-task", task.main_task));
  const chips = el("div", "detail-chips");
  for (const detail of detailChips(state)) chips.append(el("span", "detail-chip", detail));
  root.append(chips, el("div", "tier", `model: ${task.model_tier}`));
}

function renderMemory(state: ConsoleState, root: HTMLElement): void {
  const memory = state.memory;
  root.textContent = memory
    ? `records: ${memory.records}   hits: ${memory.total_hits}   tau: ${memory.tau}`
    : "memory: -";
}

function renderFeed(state: ConsoleState, root: HTMLElement): void {
  root.replaceChildren();
  for (const entry of state.feed.slice(-60).reverse()) {
    const line = el("div", `feed-entry kind-${entry.kind}`);
    line.append(el("span", "feed-label", entry.label), el("span", "feed-detail", entry.detail));
    root.append(line);
  }
}

export interface RenderTargets {
  chat: HTMLElement;
  sensors: HTMLElement;
  table: HTMLElement;
  tsm: HTMLElement;
  memory: HTMLElement;
  feed: HTMLElement;
  connection: HTMLElement;
  send: HTMLButtonElement;
  input: HTMLInputElement;
}

export function render(state: ConsoleState, targets: RenderTargets, onTap: (sensor: string) => void): void {
  renderChat(state, targets.chat);
  renderSensors(state, targets.sensors, onTap);
  renderTable(state, targets.table);
  renderTsm(state, targets.tsm);
  renderMemory(state, targets.memory);
  renderFeed(state, targets.feed);
  targets.connection.textContent = state.connected ? "live" : "reconnecting...";
  targets.connection.className = state.connected ? "conn ok" : "conn down";
  targets.send.disabled = !targets.input.value.trim();
}
