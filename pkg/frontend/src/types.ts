/** Shared types of the pointing-task runner. All geometry is in millimetres
 * (converted from pixels through the calibration factor); all timestamps are
 * milliseconds since session start. */

export interface TaskConfig {
  participantId: string;
  tabletId: string;
  /** Annotation of the device condition under test; the app itself renders
   * no friction feedback. */
  hapticLabel: boolean;
  /** Cursor-to-target distance in mm. */
  distanceD: number;
  /** Target widths in mm; one block presents each width once, shuffled. */
  widths: number[];
  /** Number of blocks, i.e. repetitions per width. */
  repsPerWidth: number;
  /** Display calibration: CSS pixels per millimetre. */
  pixelsPerMm: number;
  /** Task window, mm. */
  windowWidthMm: number;
  windowHeightMm: number;
  /** After an error trial the width is re-queued later in the same block. */
  requeueFailedWidths: boolean;
}

export const DEFAULT_CONFIG: TaskConfig = {
  participantId: "p00",
  tabletId: "tablet",
  hapticLabel: false,
  distanceD: 80,
  widths: [1, 2, 3, 4, 5, 6, 7, 8],
  repsPerWidth: 6,
  pixelsPerMm: 0, // must be calibrated before a session can start
  windowWidthMm: 100,
  windowHeightMm: 60,
  requeueFailedWidths: true,
};

export type Direction = "ltr" | "rtl";

/** One line of the exported JSONL log; field names match the analysis
 * toolkit's parser. */
export interface PointingTrialRecord {
  participant_id: string;
  tablet_id: string;
  haptic: boolean;
  distance_d: number;
  width_w: number;
  t_touch: number;
  t_release: number;
  release_x: number;
  target_center: number;
  success: boolean;
  trial_index: number;
  direction: Direction;
}

export interface PointerSample {
  t: number; // ms
  x: number; // mm
}

/** A recorded trial plus its raw pointer trace for kinematic export. */
export interface TrialEvent {
  record: PointingTrialRecord;
  trace: PointerSample[];
}

/** Layout of the upcoming trial. */
export interface TrialPresentation {
  trialIndex: number;
  direction: Direction;
  widthW: number;
  cursorX: number; // mm
  targetCenter: number; // mm
}
