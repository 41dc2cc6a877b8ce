import { describe, expect, it } from "vitest";

import { isHit, trialLayout } from "../src/geometry.js";
import { replaySession, defaultScript } from "../src/replay.js";
import { CalibrationMissingError, PointingSession } from "../src/session.js";
import { DEFAULT_CONFIG, type TaskConfig } from "../src/types.js";

const CFG: TaskConfig = { ...DEFAULT_CONFIG, pixelsPerMm: 5 };

function hitScript(n: number, mt = 800) {
  return Array.from({ length: n }, () => ({ mt, hit: true, offsetFrac: 0 }));
}

describe("geometry", () => {
  it("places cursor and target 80 mm apart in a 100 mm window", () => {
    expect(trialLayout("ltr", 80, 100)).toEqual({ cursorX: 10, targetCenter: 90 });
    expect(trialLayout("rtl", 80, 100)).toEqual({ cursorX: 90, targetCenter: 10 });
  });

  it("accepts releases up to half the width away", () => {
    expect(isHit(90, 90, 1)).toBe(true);
    expect(isHit(90.5, 90, 1)).toBe(true);
    expect(isHit(90.6, 90, 1)).toBe(false); // 0.6 mm off a 1 mm target misses
  });
});

describe("session setup", () => {
  it("refuses to start without calibration", () => {
    expect(() => new PointingSession({ ...CFG, pixelsPerMm: 0 })).toThrow(
      CalibrationMissingError,
    );
  });

  it("rejects non-positive geometry", () => {
    expect(() => new PointingSession({ ...CFG, widths: [1, -2] })).toThrow();
    expect(() => new PointingSession({ ...CFG, distanceD: 0 })).toThrow();
  });
});

describe("trial recording", () => {
  it("does not arm when the pointer lands off the cursor", () => {
    const s = new PointingSession(CFG, 1);
    const pres = s.current();
    expect(s.pointerDown(0, pres.cursorX + 20)).toBe(false);
    expect(s.armed).toBe(false);
    expect(s.pointerUp(100, pres.targetCenter)).toBeNull();
    expect(s.trialsCompleted).toBe(0);
  });

  it("records movement time to event-timestamp resolution", () => {
    const s = new PointingSession(CFG, 1);
    const pres = s.current();
    expect(s.pointerDown(123.456, pres.cursorX)).toBe(true);
    const ev = s.pointerUp(1623.456, pres.targetCenter);
    expect(ev).not.toBeNull();
    expect(ev!.record.t_release - ev!.record.t_touch).toBe(1500);
    expect(ev!.record.success).toBe(true);
  });

  it("computes success from millimetre geometry", () => {
    const s = new PointingSession({ ...CFG, widths: [1], repsPerWidth: 2 }, 1);
    const pres = s.current();
    s.pointerDown(0, pres.cursorX);
    const miss = s.pointerUp(500, pres.targetCenter + 0.6);
    expect(miss!.record.success).toBe(false);
    const pres2 = s.current();
    s.pointerDown(1000, pres2.cursorX);
    const hit = s.pointerUp(1500, pres2.targetCenter - 0.49);
    expect(hit!.record.success).toBe(true);
  });
});

describe("scheduling", () => {
  it("runs 40 trials for a single 1 mm width with 40 reps", () => {
    const cfg = { ...CFG, widths: [1], repsPerWidth: 40, requeueFailedWidths: false };
    const { session } = replaySession(cfg, hitScript(40));
    expect(session.state).toBe("completed");
    expect(session.trialsCompleted).toBe(40);
    const dirs = session.events.map((e) => e.record.direction);
    dirs.forEach((d, i) => expect(d).toBe(i % 2 === 0 ? "ltr" : "rtl"));
  });

  it("runs 48 trials for 8 widths x 6 reps", () => {
    const { session } = replaySession(CFG, hitScript(48));
    expect(session.state).toBe("completed");
    expect(session.trialsCompleted).toBe(48);
    const counts = new Map<number, number>();
    for (const e of session.events) {
      counts.set(e.record.width_w, (counts.get(e.record.width_w) ?? 0) + 1);
    }
    expect([...counts.values()]).toEqual(Array(8).fill(6));
  });

  it("alternates direction strictly even when widths are re-queued", () => {
    const script = defaultScript(60);
    const { session } = replaySession({ ...CFG, repsPerWidth: 10 }, script);
    const dirs = session.events.map((e) => e.record.direction);
    for (let i = 1; i < dirs.length; i++) {
      expect(dirs[i]).not.toBe(dirs[i - 1]);
    }
  });

  it("re-queues a failed width later in the block", () => {
    const cfg = { ...CFG, widths: [1, 2], repsPerWidth: 1 };
    const script = [
      { mt: 500, hit: false, offsetFrac: 2.0 },
      { mt: 500, hit: true, offsetFrac: 0 },
      { mt: 500, hit: true, offsetFrac: 0 },
    ];
    const { session } = replaySession(cfg, script);
    expect(session.state).toBe("completed");
    expect(session.trialsCompleted).toBe(3);
    const widths = session.events.map((e) => e.record.width_w);
    expect(widths[2]).toBe(widths[0]); // the missed width comes back
  });

  it("abort flushes a partial session", () => {
    const s = new PointingSession(CFG, 5);
    const pres = s.current();
    s.pointerDown(0, pres.cursorX);
    s.pointerUp(600, pres.targetCenter);
    s.abort();
    expect(s.state).toBe("aborted");
    expect(s.trialsCompleted).toBe(1);
    expect(() => s.current()).toThrow();
  });
});
