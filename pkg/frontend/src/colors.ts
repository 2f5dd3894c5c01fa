// Emotion chip colors. Must stay one-to-one with the robot simulator's LED
// table so the console shows exactly what the robot's chest LED shows.

export const EMOTION_COLORS: Record<string, string> = {
  Happiness: "yellow",
  Anger: "red",
  Sadness: "blue",
  Fear: "purple",
  Disgust: "green",
  Surprise: "cyan",
  Contempt: "orange",
  Neutral: "white",
};

export const EMOTIONS = Object.keys(EMOTION_COLORS);

export function emotionColor(emotion: string): string {
  return EMOTION_COLORS[emotion] ?? "gray";
}
