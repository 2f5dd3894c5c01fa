import { describe, expect, it } from "vitest";

import { EMOTION_COLORS, EMOTIONS, emotionColor } from "../src/colors.js";

// The gateway-side LED table; the console must match it one-to-one.
const ROBOT_LED_TABLE: Record<string, string> = {
  Happiness: "yellow",
  Anger: "red",
  Sadness: "blue",
  Fear: "purple",
  Disgust: "green",
  Surprise: "cyan",
  Contempt: "orange",
  Neutral: "white",
};

describe("emotion chip colors", () => {
  it("covers exactly the eight labels", () => {
    expect(EMOTIONS.sort()).toEqual(Object.keys(ROBOT_LED_TABLE).sort());
  });

  it("matches the robot LED table one-to-one", () => {
    expect(EMOTION_COLORS).toEqual(ROBOT_LED_TABLE);
  });

  it("unknown labels fall back to gray instead of crashing", () => {
    expect(emotionColor("Mystery")).toBe("gray");
  });
});
