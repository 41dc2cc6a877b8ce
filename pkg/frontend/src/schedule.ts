/** Trial scheduling: shuffled width order per block, strictly alternating
 * travel direction. */

import type { Direction } from "./types.js";

/** Small deterministic PRNG so test sessions are reproducible; the app seeds
 * it from the wall clock. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function shuffled<T>(items: readonly T[], rand: () => number): T[] {
  const out = items.slice();
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

/** Direction alternates on every trial, regardless of width re-queues. */
export function directionFor(trialIndex: number): Direction {
  return trialIndex % 2 === 0 ? "ltr" : "rtl";
}
