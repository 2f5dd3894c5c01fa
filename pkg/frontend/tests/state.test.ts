import { describe, expect, it } from "vitest";

import {
  applyEvent,
  applyNotice,
  applySnapshots,
  applyTurnResult,
  applyUserMessage,
  detailChips,
  initialState,
  isBound,
  robotActionsSince,
  setConnected,
  tableRow,
} from "../src/state.js";
import type { GatewayEvent, TurnResultPayload } from "../src/types.js";

const TABLE_TURN: TurnResultPayload = {
  turn_id: "t1",
  session_id: "s",
  text: "plan my day trip",
  route: { target: "SIA", rationale: "dialogue" },
  path: "slow",
  script: {
    utterances: [
      { text: "Sounds fun!", emotion: "Happiness", rate: 1.05 },
      { text: "Here is the plan.", emotion: "Neutral", rate: 1.0 },
    ],
  },
  commands: null,
  trace: [],
  error: null,
  latency_ms: 12.5,
};

describe("chat reducers", () => {
  it("appends user then turn entries", () => {
    let state = applyUserMessage(initialState(), "plan my day trip");
    state = applyTurnResult(state, TABLE_TURN);
    expect(state.chat.map((e) => e.kind)).toEqual(["user", "turn"]);
    expect(state.chat[1].turn?.route?.target).toBe("SIA");
  });

  it("turn errors become error entries", () => {
    const state = applyTurnResult(initialState(), {
      ...TABLE_TURN,
      error: "SchemaViolation: no rule",
      script: null,
    });
    expect(state.chat[0].kind).toBe("error");
    expect(state.chat[0].text).toContain("SchemaViolation");
  });
});

describe("snapshots", () => {
  it("tsm snapshot produces one chip per detail unit", () => {
    const state = applySnapshots(initialState(), {
      tsm: {
        session_id: "s",
        state: {
          main_task: "Plan a day trip to New York City",
          details: ["Date tomorrow", "return by 7:00 PM", "goal enjoy the city"],
          model_tier: "light",
        },
      },
    });
    expect(detailChips(state)).toHaveLength(3);
    expect(detailChips(state)[1]).toBe("return by 7:00 PM");
  });

  it("table rows expose binding status", () => {
    const state = applySnapshots(initialState(), {
      table: [
        { sensor: "chin", worker_id: "w-1", skill: "take_photo", status: "Active", heartbeat_at: 0 },
      ],
    });
    expect(isBound(state, "chin")).toBe(true);
    expect(isBound(state, "head_top")).toBe(false);
    expect(tableRow(state, "chin")?.status).toBe("Active");
  });
});

describe("event stream reducer", () => {
  const at = 1_700_000_000;

  it("folds sensor and robot_action events into the feed", () => {
    let state = initialState();
    const sensorEvent: GatewayEvent = { type: "sensor", at, sensor: "chin", event_id: "e1" };
    const actionEvent: GatewayEvent = {
      type: "robot_action",
      at: at + 0.1,
      op: "capture_photo",
      args: { image: "x.sim" },
      seq: 4,
    };
    let refresh;
    [state, refresh] = applyEvent(state, sensorEvent);
    expect(refresh).toBe(false);
    [state, refresh] = applyEvent(state, actionEvent);
    expect(refresh).toBe(false);
    expect(state.feed).toHaveLength(2);
    expect(robotActionsSince(state, at)).toHaveLength(1);
    expect(robotActionsSince(state, at)[0].detail).toContain("capture_photo");
  });

  it("supervision events request a table refresh", () => {
    const restart: GatewayEvent = {
      type: "restart",
      at,
      sensor: "chin",
      old_worker_id: "w-1",
      new_worker_id: "w-2",
    };
    const [state, refresh] = applyEvent(initialState(), restart);
    expect(refresh).toBe(true);
    expect(state.feed[0].detail).toContain("w-1 -> w-2");
  });

  it("caps the feed at the configured limit", () => {
    let state = initialState();
    for (let i = 0; i < state.feedLimit + 50; i += 1) {
      [state] = applyEvent(state, { type: "sensor", at: at + i, sensor: "chin", event_id: `e${i}` });
    }
    expect(state.feed).toHaveLength(state.feedLimit);
    expect(state.feed.at(-1)?.detail).toContain(`e${state.feedLimit + 49}`);
  });

  it("notices land in the feed for unbound taps", () => {
    const state = applyNotice(initialState(), "chin: no binding");
    expect(state.feed[0].kind).toBe("notice");
    expect(state.feed[0].detail).toBe("chin: no binding");
  });

  it("connection status toggles", () => {
    const state = setConnected(initialState(), true);
    expect(state.connected).toBe(true);
    expect(setConnected(state, false).connected).toBe(false);
  });
});
