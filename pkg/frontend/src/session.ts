/** Pointing-task session state machine.
 *
 * A trial arms when the pointer goes down on the cursor disc and records on
 * release: movement time is release minus down, success is release position
 * against the target geometry, both in millimetres. Direction alternates
 * every trial; each block presents every width once in shuffled order, and a
 * missed width is re-queued later in its block (the error trial itself is
 * still logged).
 */

import { isHit, trialLayout } from "./geometry.js";
import { directionFor, mulberry32, shuffled } from "./schedule.js";
import type {
  PointerSample,
  TaskConfig,
  TrialEvent,
  TrialPresentation,
} from "./types.js";

export const CURSOR_RADIUS_MM = 4;

export type SessionState = "running" | "completed" | "aborted";

export class CalibrationMissingError extends Error {
  constructor() {
    super("display is not calibrated: pixelsPerMm must be positive");
  }
}

export class PointingSession {
  readonly config: TaskConfig;
  readonly events: TrialEvent[] = [];
  private queue: number[] = [];
  private blocksDone = 0;
  private trialIndex = 0;
  private armedAt: number | null = null;
  private trace: PointerSample[] = [];
  private rand: () => number;
  private state_: SessionState = "running";

  constructor(config: TaskConfig, rngSeed: number = Date.now()) {
    if (!(config.pixelsPerMm > 0)) {
      throw new CalibrationMissingError();
    }
    if (!(config.distanceD > 0) || config.widths.some((w) => !(w > 0))) {
      throw new Error("distance and all widths must be positive");
    }
    if (config.repsPerWidth < 1) {
      throw new Error("repsPerWidth must be at least 1");
    }
    this.config = config;
    this.rand = mulberry32(rngSeed);
    this.queue = shuffled(config.widths, this.rand);
  }

  get state(): SessionState {
    return this.state_;
  }

  get trialsCompleted(): number {
    return this.events.length;
  }

  /** Layout of the trial currently awaiting input. */
  current(): TrialPresentation {
    if (this.state_ !== "running") {
      throw new Error(`session is ${this.state_}`);
    }
    const direction = directionFor(this.trialIndex);
    const { cursorX, targetCenter } = trialLayout(
      direction,
      this.config.distanceD,
      this.config.windowWidthMm,
    );
    return {
      trialIndex: this.trialIndex,
      direction,
      widthW: this.queue[0],
      cursorX,
      targetCenter,
    };
  }

  get armed(): boolean {
    return this.armedAt !== null;
  }

  /** Pointer down: arms the trial only when it lands on the cursor disc. */
  pointerDown(t: number, x: number): boolean {
    if (this.state_ !== "running" || this.armedAt !== null) {
      return false;
    }
    const { cursorX } = this.current();
    if (Math.abs(x - cursorX) > CURSOR_RADIUS_MM) {
      return false;
    }
    this.armedAt = t;
    this.trace = [{ t, x }];
    return true;
  }

  pointerMove(t: number, x: number): void {
    if (this.armedAt !== null) {
      this.trace.push({ t, x });
    }
  }

  /** Pointer up: records the trial when armed and advances the schedule. */
  pointerUp(t: number, x: number): TrialEvent | null {
    if (this.state_ !== "running" || this.armedAt === null) {
      return null;
    }
    const pres = this.current();
    if (!(t > this.armedAt)) {
      // zero-length interactions carry no movement time; disarm and re-home
      this.armedAt = null;
      this.trace = [];
      return null;
    }
    this.trace.push({ t, x });
    const success = isHit(x, pres.targetCenter, pres.widthW);
    const event: TrialEvent = {
      record: {
        participant_id: this.config.participantId,
        tablet_id: this.config.tabletId,
        haptic: this.config.hapticLabel,
        distance_d: this.config.distanceD,
        width_w: pres.widthW,
        t_touch: this.armedAt,
        t_release: t,
        release_x: x,
        target_center: pres.targetCenter,
        success,
        trial_index: pres.trialIndex,
        direction: pres.direction,
      },
      trace: this.trace,
    };
    this.events.push(event);
    this.armedAt = null;
    this.trace = [];
    this.advance(success, pres.widthW);
    return event;
  }

  /** Flush the session early; recorded trials stay exportable. */
  abort(): void {
    if (this.state_ === "running") {
      this.state_ = "aborted";
      this.armedAt = null;
      this.trace = [];
    }
  }

  private advance(success: boolean, width: number): void {
    this.trialIndex += 1;
    this.queue.shift();
    if (!success && this.config.requeueFailedWidths) {
      this.queue.push(width);
    }
    if (this.queue.length === 0) {
      this.blocksDone += 1;
      if (this.blocksDone >= this.config.repsPerWidth) {
        this.state_ = "completed";
      } else {
        this.queue = shuffled(this.config.widths, this.rand);
      }
    }
  }
}
