/** Scripted replay harness: drives a session with synthetic pointer events
 * whose timing and outcomes are known exactly, so exported logs can be
 * checked against ground truth. */

import { PointingSession } from "./session.js";
import type { TaskConfig } from "./types.js";

export interface ScriptedTrial {
  /** Movement time in ms (integer keeps float arithmetic exact). */
  mt: number;
  hit: boolean;
  /** Release offset from the target center as a fraction of the half-width;
   * |offset| < 1 for hits, > 1 for misses. */
  offsetFrac: number;
}

export interface ReplayResult {
  session: PointingSession;
  groundTruth: {
    movementTimes: number[];
    hits: boolean[];
    nErrors: number;
  };
}

export function replaySession(
  config: TaskConfig,
  script: readonly ScriptedTrial[],
  interTrialGapMs = 500,
): ReplayResult {
  const session = new PointingSession(config, 1234);
  let clock = 0;
  const movementTimes: number[] = [];
  const hits: boolean[] = [];
  for (const step of script) {
    if (session.state !== "running") {
      break;
    }
    const pres = session.current();
    const down = clock + interTrialGapMs;
    if (!session.pointerDown(down, pres.cursorX)) {
      throw new Error("replay failed to arm on the cursor");
    }
    const release = pres.targetCenter + (step.offsetFrac * pres.widthW) / 2;
    session.pointerMove(down + step.mt / 2, (pres.cursorX + release) / 2);
    const event = session.pointerUp(down + step.mt, release);
    if (event === null) {
      throw new Error("replay release was not recorded");
    }
    if (event.record.success !== step.hit) {
      throw new Error(
        `scripted outcome mismatch at trial ${event.record.trial_index}: ` +
          `offsetFrac ${step.offsetFrac} gave success=${event.record.success}`,
      );
    }
    movementTimes.push(step.mt);
    hits.push(step.hit);
    clock = down + step.mt;
  }
  return {
    session,
    groundTruth: {
      movementTimes,
      hits,
      nErrors: hits.filter((h) => !h).length,
    },
  };
}

/** Deterministic 100-trial script with a sprinkling of misses. */
export function defaultScript(n = 100): ScriptedTrial[] {
  const out: ScriptedTrial[] = [];
  for (let i = 0; i < n; i++) {
    const miss = i % 9 === 4; // 11 misses in 100 trials
    out.push({
      mt: 700 + 37 * (i % 13) + 11 * (i % 7),
      hit: !miss,
      offsetFrac: miss ? 1.5 + 0.1 * (i % 3) : -0.8 + 0.16 * (i % 10),
    });
  }
  return out;
}
