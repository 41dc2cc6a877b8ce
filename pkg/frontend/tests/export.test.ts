import { describe, expect, it } from "vitest";

import { EmptySessionError, exportLogs, exportTraces } from "../src/exportLogs.js";
import { replaySession, defaultScript } from "../src/replay.js";
import { DEFAULT_CONFIG, type TaskConfig } from "../src/types.js";

const CFG: TaskConfig = { ...DEFAULT_CONFIG, pixelsPerMm: 5, repsPerWidth: 2 };

const REQUIRED_FIELDS = [
  "participant_id",
  "tablet_id",
  "haptic",
  "distance_d",
  "width_w",
  "t_touch",
  "t_release",
  "release_x",
  "target_center",
  "success",
  "trial_index",
  "direction",
].sort();

describe("exportLogs", () => {
  it("emits one valid JSON object per line with all required fields", () => {
    const { session } = replaySession(CFG, defaultScript(16));
    const text = exportLogs(session.events);
    const lines = text.trimEnd().split("\n");
    expect(lines.length).toBe(session.trialsCompleted);
    for (const line of lines) {
      const obj = JSON.parse(line);
      expect(Object.keys(obj).sort()).toEqual(REQUIRED_FIELDS);
      expect(obj.t_release).toBeGreaterThan(obj.t_touch);
      expect(obj.success).toBe(
        Math.abs(obj.release_x - obj.target_center) <= obj.width_w / 2,
      );
      expect(["ltr", "rtl"]).toContain(obj.direction);
    }
  });

  it("keeps trials in session order", () => {
    const { session } = replaySession(CFG, defaultScript(16));
    const idx = exportLogs(session.events)
      .trimEnd()
      .split("\n")
      .map((l) => JSON.parse(l).trial_index);
    expect(idx).toEqual(idx.slice().sort((a, b) => a - b));
  });

  it("refuses to export an empty session", () => {
    expect(() => exportLogs([])).toThrow(EmptySessionError);
    expect(() => exportTraces([])).toThrow(EmptySessionError);
  });

  it("exports pointer traces alongside", () => {
    const { session } = replaySession(CFG, defaultScript(4));
    const lines = exportTraces(session.events).trimEnd().split("\n");
    expect(lines.length).toBe(4);
    const first = JSON.parse(lines[0]);
    expect(first.samples.length).toBeGreaterThanOrEqual(2);
  });
});
