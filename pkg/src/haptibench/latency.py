"""End-to-end latency estimation from ridge-rendering recordings.

A friction ridge is programmed at a fixed position; the finger crosses its
leading edge at t1 and the friction response emerges at t2, located at the
extremum of the smoothed friction derivative. The latency is t2 - t1, and
the spatial mislocation of the rendered ridge is speed * latency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientCrossings, NoActuationDetected, RidgeNotCrossed
from .swipes import Swipe, moving_average

POLARITIES = ("friction_up", "friction_down")


@dataclass(frozen=True)
class RidgeSpec:
    x_lo: float  # mm
    x_hi: float  # mm
    polarity: str  # friction_up | friction_down

    def __post_init__(self):
        if not self.x_hi > self.x_lo:
            raise ValueError("ridge needs x_hi > x_lo")
        if self.polarity not in POLARITIES:
            raise ValueError(f"polarity must be one of {POLARITIES}")

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    def leading_edge(self, direction: str) -> float:
        return self.x_lo if direction == "ltr" else self.x_hi


@dataclass(frozen=True)
class CrossingEstimate:
    direction: str
    t1: float  # s, finger reaches the leading edge
    t2: float  # s, friction derivative extremum
    dt: float  # s, t2 - t1
    x_onset: float  # mm, finger position when the response emerges
    shift_mm: float  # signed displacement of the onset from the leading edge


@dataclass(frozen=True)
class LatencyEstimate:
    per_crossing: list[CrossingEstimate]
    mean_dt: float  # s
    std_dt: float  # s, sample std across crossings
    n: int
    per_direction: dict[str, tuple[float, float, int]]  # direction -> (mean, std, n)


def _time_ordered(s: Swipe) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if s.t.size >= 2 and s.t[0] > s.t[-1]:
        return s.t[::-1], s.x[::-1], s.mu[::-1]
    return s.t, s.x, s.mu


def detect_ridge_crossing(s: Swipe, ridge: RidgeSpec) -> float:
    """Time at which the finger crosses the ridge's leading edge, linearly
    interpolated between the bracketing samples."""
    t, x, _ = _time_ordered(s)
    edge = ridge.leading_edge(s.direction)
    if s.direction == "ltr":
        hits = np.nonzero((x[:-1] < edge) & (x[1:] >= edge))[0]
    else:
        hits = np.nonzero((x[:-1] > edge) & (x[1:] <= edge))[0]
    if hits.size == 0:
        raise RidgeNotCrossed(
            f"{s.direction} swipe over [{x.min():.2f}, {x.max():.2f}] mm "
            f"never crosses the edge at {edge} mm"
        )
    i = int(hits[0])
    frac = (edge - x[i]) / (x[i + 1] - x[i])
    return float(t[i] + frac * (t[i + 1] - t[i]))


def detect_actuation_onset(
    s: Swipe,
    ridge: RidgeSpec,
    smoothing_window: float = 0.005,
    search_window: float = 0.300,
    noise_floor_factor: float = 5.0,
) -> float:
    """Time of the friction response to the ridge.

    mu(t) is low-pass filtered with a zero-phase moving average, and t2 is
    where its derivative reaches the extremum matching the ridge polarity
    (maximum for a friction increase, minimum for a decrease) inside
    [t1, t1 + search_window]. The extremum must exceed noise_floor_factor
    times the pre-crossing derivative spread, otherwise no actuation is
    detectable.
    """
    t1 = detect_ridge_crossing(s, ridge)
    t, x, mu = _time_ordered(s)
    dt_sample = float(np.median(np.diff(t)))
    win = max(1, int(round(smoothing_window / dt_sample)) | 1)
    mu_s = moving_average(mu, win)
    dmu = np.gradient(mu_s, t)
    region = (t >= t1) & (t <= t1 + search_window)
    if not region.any():
        raise NoActuationDetected("no samples after the crossing")
    sel = np.nonzero(region)[0]
    vals = dmu[sel] if ridge.polarity == "friction_up" else -dmu[sel]
    k_local = int(np.argmax(vals))
    magnitude = float(vals[k_local])
    pre = np.nonzero(t < t1)[0]
    if pre.size >= 10:
        floor = noise_floor_factor * float(np.std(dmu[pre]))
    else:
        med = float(np.median(dmu))
        floor = noise_floor_factor * 1.4826 * float(np.median(np.abs(dmu - med)))
    if not magnitude > floor:
        raise NoActuationDetected(
            f"derivative extremum {magnitude:.3g} below noise floor {floor:.3g}"
        )
    # a near-step response yields a flat derivative plateau after smoothing;
    # take the plateau center rather than its first sample
    thr = magnitude - 1e-3 * abs(magnitude)
    left = k_local
    while left > 0 and vals[left - 1] >= thr:
        left -= 1
    right = k_local
    while right < vals.size - 1 and vals[right + 1] >= thr:
        right += 1
    return float(0.5 * (t[sel[left]] + t[sel[right]]))


def estimate_latency(
    swipes: Sequence[Swipe],
    ridge: RidgeSpec,
    smoothing_window: float = 0.005,
    search_window: float = 0.300,
    noise_floor_factor: float = 5.0,
) -> LatencyEstimate:
    """Aggregate per-crossing latencies over a set of ridge swipes.

    Swipes that miss the ridge or show no detectable response are skipped;
    both sliding directions are pooled, with per-direction estimates kept
    alongside so shift asymmetry stays inspectable.
    """
    crossings: list[CrossingEstimate] = []
    for s in swipes:
        try:
            t1 = detect_ridge_crossing(s, ridge)
            t2 = detect_actuation_onset(
                s,
                ridge,
                smoothing_window=smoothing_window,
                search_window=search_window,
                noise_floor_factor=noise_floor_factor,
            )
        except (RidgeNotCrossed, NoActuationDetected):
            continue
        t, x, _ = _time_ordered(s)
        x_onset = float(np.interp(t2, t, x))
        edge = ridge.leading_edge(s.direction)
        crossings.append(
            CrossingEstimate(
                direction=s.direction,
                t1=t1,
                t2=t2,
                dt=t2 - t1,
                x_onset=x_onset,
                shift_mm=x_onset - edge,
            )
        )
    if len(crossings) < 2:
        raise InsufficientCrossings(
            f"only {len(crossings)} usable crossing(s); need at least 2"
        )
    dts = np.array([c.dt for c in crossings])
    per_direction = {}
    for d in ("ltr", "rtl"):
        sub = np.array([c.dt for c in crossings if c.direction == d])
        if sub.size:
            std = float(sub.std(ddof=1)) if sub.size > 1 else 0.0
            per_direction[d] = (float(sub.mean()), std, int(sub.size))
    return LatencyEstimate(
        per_crossing=crossings,
        mean_dt=float(dts.mean()),
        std_dt=float(dts.std(ddof=1)),
        n=len(crossings),
        per_direction=per_direction,
    )


def spatial_shift(dt: float, v: float) -> float:
    """Spatial mislocation (mm) of a haptic feature rendered with latency dt
    while sliding at speed v; preconditions dt >= 0 and v > 0."""
    return v * dt
