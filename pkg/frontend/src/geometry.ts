/** Millimetre/pixel conversion and target geometry. */

import type { Direction } from "./types.js";

export function mmToPx(mm: number, pixelsPerMm: number): number {
  return mm * pixelsPerMm;
}

export function pxToMm(px: number, pixelsPerMm: number): number {
  return px / pixelsPerMm;
}

/** Release counts as a hit when its distance to the target center does not
 * exceed half the target width. Must match the analysis-side rule exactly. */
export function isHit(releaseX: number, targetCenter: number, widthW: number): boolean {
  return Math.abs(releaseX - targetCenter) <= widthW / 2;
}

/** Cursor and target are centered in the task window, distanceD apart; the
 * pair flips with the travel direction. */
export function trialLayout(
  direction: Direction,
  distanceD: number,
  windowWidthMm: number,
): { cursorX: number; targetCenter: number } {
  const margin = (windowWidthMm - distanceD) / 2;
  if (margin < 0) {
    throw new Error(`distance ${distanceD} mm exceeds the ${windowWidthMm} mm window`);
  }
  return direction === "ltr"
    ? { cursorX: margin, targetCenter: windowWidthMm - margin }
    : { cursorX: windowWidthMm - margin, targetCenter: margin };
}
