/** JSONL export in the analysis toolkit's trial-log format. */

import type { PointerSample, TrialEvent } from "./types.js";

export class EmptySessionError extends Error {
  constructor() {
    super("no completed trial to export");
  }
}

/** One JSON object per line, exactly the fields the core parser expects. */
export function exportLogs(events: readonly TrialEvent[]): string {
  if (events.length === 0) {
    throw new EmptySessionError();
  }
  return events.map((e) => JSON.stringify(e.record)).join("\n") + "\n";
}

/** Optional kinematic export: per-trial pointer traces as JSONL. */
export function exportTraces(events: readonly TrialEvent[]): string {
  if (events.length === 0) {
    throw new EmptySessionError();
  }
  return (
    events
      .map((e) =>
        JSON.stringify({
          trial_index: e.record.trial_index,
          samples: e.trace.map((s: PointerSample) => [s.t, s.x]),
        }),
      )
      .join("\n") + "\n"
  );
}
