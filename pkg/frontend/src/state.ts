// Console view state and its pure reducers. The render layer draws whatever
// is here; nothing in this module mutates orchestrator data, it only folds
// gateway responses and stream events into view models.

import type {
  GatewayEvent,
  MemorySnapshotPayload,
  ProcessTableEntryPayload,
  TsmSnapshotPayload,
  TurnResultPayload,
} from "./types.js";

export interface ChatEntry {
  kind: "user" | "turn" | "error";
  text: string;
  turn?: TurnResultPayload;
}

export interface FeedEntry {
  at: number;
  label: string;
  detail: string;
  kind: string; // event type or "notice"
}

export interface ConsoleState {
  chat: ChatEntry[];
  feed: FeedEntry[];
  table: ProcessTableEntryPayload[];
  tsm: TsmSnapshotPayload | null;
  memory: MemorySnapshotPayload | null;
  connected: boolean;
  feedLimit: number;
}

export function initialState(): ConsoleState {
  return { chat: [], feed: [], table: [], tsm: null, memory: null, connected: false, feedLimit: 200 };
}

export function detailChips(state: ConsoleState): string[] {
  return state.tsm?.state?.details ?? [];
}

export function isBound(state: ConsoleState, sensor: string): boolean {
  return state.table.some((entry) => entry.sensor === sensor);
}

export function tableRow(state: ConsoleState, sensor: string): ProcessTableEntryPayload | undefined {
  return state.table.find((entry) => entry.sensor === sensor);
}

export function applyUserMessage(state: ConsoleState, text: string): ConsoleState {
  return { ...state, chat: [...state.chat, { kind: "user", text }] };
}

export function applyTurnResult(state: ConsoleState, turn: TurnResultPayload): ConsoleState {
  const entry: ChatEntry = turn.error
    ? { kind: "error", text: turn.error, turn }
    : { kind: "turn", text: turn.text, turn };
  return { ...state, chat: [...state.chat, entry] };
}

export function applySnapshots(
  state: ConsoleState,
  snapshots: {
    tsm?: TsmSnapshotPayload;
    table?: ProcessTableEntryPayload[];
    memory?: MemorySnapshotPayload;
  },
): ConsoleState {
  return {
    ...state,
    tsm: snapshots.tsm ?? state.tsm,
    table: snapshots.table ?? state.table,
    memory: snapshots.memory ?? state.memory,
  };
}

function pushFeed(state: ConsoleState, entry: FeedEntry): ConsoleState {
  const feed = [...state.feed, entry].slice(-state.feedLimit);
  return { ...state, feed };
}

export function noticeEntry(text: string): FeedEntry {
  return { at: Date.now() / 1000, label: "notice", detail: text, kind: "notice" };
}

export function applyNotice(state: ConsoleState, text: string): ConsoleState {
  return pushFeed(state, noticeEntry(text));
}

/** Fold one SSE event into the feed; returns [state, needsTableRefresh]. */
export function applyEvent(state: ConsoleState, event: GatewayEvent): [ConsoleState, boolean] {
  let label = event.type;
  let detail = "";
  let refreshTable = false;
  switch (event.type) {
    case "sensor":
      detail = `${event.sensor} touched (${event.event_id})`;
      break;
    case "robot_action":
      detail = `${event.op} ${JSON.stringify(event.args ?? {})}`;
      break;
    case "restart":
      detail = `${event.sensor}: worker ${event.old_worker_id} -> ${event.new_worker_id}`;
      refreshTable = true;
      break;
    case "backoff":
      detail = `${event.sensor}: level ${event.level}`;
      refreshTable = true;
      break;
    case "remount":
      detail = `${event.sensor} -> ${event.skill}`;
      refreshTable = true;
      break;
    case "turn":
      detail = `${event.session_id}: ${event.target ?? "?"}${event.path ? ` [${event.path}]` : ""}${
        event.error ? ` error: ${event.error}` : ""
      }`;
      break;
    case "memory_hit":
      detail = `${event.main_task} (distance ${(event.distance as number).toFixed(4)})`;
      break;
    default:
      detail = JSON.stringify({ ...event, type: undefined, at: undefined });
  }
  return [pushFeed(state, { at: event.at, label, detail, kind: event.type }), refreshTable];
}

export function setConnected(state: ConsoleState, connected: boolean): ConsoleState {
  return { ...state, connected };
}

/** Robot actions that arrived after a given timestamp (sensor-tap verification). */
export function robotActionsSince(state: ConsoleState, since: number): FeedEntry[] {
  return state.feed.filter((entry) => entry.kind === "robot_action" && entry.at >= since);
}
