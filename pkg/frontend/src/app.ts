/** Browser wiring: calibration screen, task rendering, pointer handling,
 * and log download. All task logic lives in the pure modules. */

import { exportLogs } from "./exportLogs.js";
import { mmToPx, pxToMm } from "./geometry.js";
import { CURSOR_RADIUS_MM, PointingSession } from "./session.js";
import { DEFAULT_CONFIG, type TaskConfig } from "./types.js";

const CARD_WIDTH_MM = 85.6; // ISO/IEC 7810 ID-1 card, the calibration ruler
const CALIBRATION_KEY = "haptibench.pixelsPerMm";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function loadCalibration(): number | null {
  const raw = localStorage.getItem(CALIBRATION_KEY);
  const v = raw === null ? NaN : Number(raw);
  return Number.isFinite(v) && v > 0 ? v : null;
}

// ---- calibration screen ----

function setupCalibration(onDone: (ppm: number) => void): void {
  const ruler = $("ruler");
  const slider = $("ruler-slider") as HTMLInputElement;
  const readout = $("ruler-readout");
  const stored = loadCalibration();
  slider.value = String(stored ? stored * CARD_WIDTH_MM : 340);

  const update = () => {
    const px = Number(slider.value);
    ruler.style.width = `${px}px`;
    readout.textContent = `${(px / CARD_WIDTH_MM).toFixed(2)} px/mm`;
  };
  slider.addEventListener("input", update);
  update();

  $("calibrate-done").addEventListener("click", () => {
    const ppm = Number(slider.value) / CARD_WIDTH_MM;
    localStorage.setItem(CALIBRATION_KEY, String(ppm));
    onDone(ppm);
  });
}

// ---- session screen ----

function configFromForm(ppm: number): TaskConfig {
  const widthsField = ($("cfg-widths") as HTMLInputElement).value.trim();
  const widths = widthsField
    .split(/[\s,]+/)
    .filter((s) => s.length > 0)
    .map(Number);
  return {
    ...DEFAULT_CONFIG,
    participantId: ($("cfg-participant") as HTMLInputElement).value || "p00",
    tabletId: ($("cfg-tablet") as HTMLInputElement).value || "tablet",
    hapticLabel: ($("cfg-haptic") as HTMLInputElement).checked,
    widths: widths.length ? widths : DEFAULT_CONFIG.widths,
    repsPerWidth: Number(($("cfg-reps") as HTMLInputElement).value) || 6,
    pixelsPerMm: ppm,
  };
}

function download(name: string, text: string): void {
  const a = document.createElement("a");
  a.href = URL.createObjectURL(new Blob([text], { type: "application/jsonl" }));
  a.download = name;
  a.click();
  URL.revokeObjectURL(a.href);
}

function runTask(config: TaskConfig): void {
  const area = $("task-area");
  const status = $("status");
  const cursor = $("cursor");
  const target = $("target");
  area.style.width = `${mmToPx(config.windowWidthMm, config.pixelsPerMm)}px`;
  area.style.height = `${mmToPx(config.windowHeightMm, config.pixelsPerMm)}px`;
  const r = mmToPx(CURSOR_RADIUS_MM, config.pixelsPerMm);
  cursor.style.width = cursor.style.height = `${2 * r}px`;

  const session = new PointingSession(config);
  const t0 = performance.now();
  const clock = () => performance.now() - t0;
  const toMm = (ev: PointerEvent) =>
    pxToMm(ev.clientX - area.getBoundingClientRect().left, config.pixelsPerMm);

  const present = () => {
    if (session.state !== "running") {
      finish();
      return;
    }
    const pres = session.current();
    cursor.style.left = `${mmToPx(pres.cursorX, config.pixelsPerMm) - r}px`;
    target.style.left = `${mmToPx(pres.targetCenter - pres.widthW / 2, config.pixelsPerMm)}px`;
    target.style.width = `${mmToPx(pres.widthW, config.pixelsPerMm)}px`;
    status.textContent =
      `trial ${pres.trialIndex + 1}: drag the cursor ` +
      `${pres.direction === "ltr" ? "right" : "left"} into the target ` +
      `(W dash ${pres.widthW} mm)`;
  };

  const finish = () => {
    const label = session.state === "aborted" ? "incomplete" : "complete";
    status.textContent = `session ${label}: ${session.trialsCompleted} trials recorded`;
    const btn = $("download") as HTMLButtonElement;
    btn.disabled = session.trialsCompleted === 0;
  };

  area.addEventListener("pointerdown", (ev) => {
    if (session.pointerDown(clock(), toMm(ev))) {
      area.setPointerCapture(ev.pointerId);
      cursor.classList.add("held");
    }
  });
  area.addEventListener("pointermove", (ev) => {
    session.pointerMove(clock(), toMm(ev));
    if (session.armed) {
      cursor.style.left = `${ev.clientX - area.getBoundingClientRect().left - r}px`;
    }
  });
  area.addEventListener("pointerup", (ev) => {
    const event = session.pointerUp(clock(), toMm(ev));
    cursor.classList.remove("held");
    if (event) present();
  });

  $("abort").addEventListener("click", () => {
    session.abort();
    finish();
  });
  $("download").addEventListener("click", () => {
    const suffix = session.state === "aborted" ? ".incomplete" : "";
    download(
      `${config.participantId}_${config.tabletId}${suffix}.trials.jsonl`,
      exportLogs(session.events),
    );
  });
  $("export-config").addEventListener("click", () => {
    download(
      `${config.participantId}_${config.tabletId}.session.json`,
      JSON.stringify(
        { config, clock: "performance.now", clock_resolution_ms: 0.005 },
        null,
        2,
      ),
    );
  });

  $("setup-screen").hidden = true;
  $("task-screen").hidden = false;
  present();
}

export function main(): void {
  setupCalibration((ppm) => {
    $("calibration-screen").hidden = true;
    $("setup-screen").hidden = false;
    $("start").addEventListener("click", () => runTask(configFromForm(ppm)), {
      once: true,
    });
  });
}

if (typeof document !== "undefined") {
  main();
}
