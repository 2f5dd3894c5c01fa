// Wire types mirroring the gateway API payloads. Everything the console
// renders is traceable to one of these fields (server-authoritative).

export type RouteTarget = "PIA" | "SIA";

export interface UtterancePayload {
  text: string;
  emotion: string;
  rate: number;
}

export interface ScriptPayload {
  utterances: UtterancePayload[];
}

export interface CommandOutcomePayload {
  command: "BIND" | "UPDATE" | "UNBIND" | "INVOKE";
  sensor?: string;
  skill?: string;
  args?: Record<string, unknown>;
  outcome: "ok" | "error";
  detail: string;
}

export interface TraceStepPayload {
  function_name: string;
  params: Record<string, unknown>;
  outcome: "ok" | "error";
  detail: string;
}

export interface TurnResultPayload {
  turn_id: string;
  session_id: string;
  text: string;
  route: { target: RouteTarget; rationale: string } | null;
  path: "fast" | "slow" | "control" | null;
  script: ScriptPayload | null;
  commands: CommandOutcomePayload[] | null;
  trace: TraceStepPayload[];
  error: string | null;
  latency_ms: number;
}

export interface TsmSnapshotPayload {
  session_id: string;
  state: { main_task: string; details: string[]; model_tier: string } | null;
}

export interface ProcessTableEntryPayload {
  sensor: string;
  worker_id: string;
  skill: string;
  status: "Active" | "Inactive";
  heartbeat_at: number;
}

export interface MemorySnapshotPayload {
  records: number;
  total_hits: number;
  tau: number;
  dimension: number;
  keys?: string[];
}

export interface GatewayEvent {
  type: string;
  at: number;
  [key: string]: unknown;
}

export const ALL_SENSORS = [
  "head_top",
  "head_front",
  "head_back",
  "head_left",
  "head_right",
  "chin",
  "bumper_front_left",
  "bumper_front_right",
  "bumper_rear_left",
  "bumper_rear_right",
] as const;

export type SensorName = (typeof ALL_SENSORS)[number];
