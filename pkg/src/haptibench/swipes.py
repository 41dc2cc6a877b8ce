"""Turn raw recordings into canonical friction-vs-position swipes.

Pipeline order: compute_friction -> segment_swipes -> estimate_trend_slope ->
correct_trend -> quality_gate. Right-to-left swipes are flipped so position
always ascends; their time array therefore descends.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.ndimage import median_filter

from .errors import (
    AllSamplesInvalid,
    AlreadyCorrected,
    InsufficientData,
    NoSwipesFound,
)
from .io import CONTACT_THRESHOLD_N, Recording

TREND_PIVOT_MM = 50.0

#: Default zero-phase moving-average width for velocity estimation (samples).
VELOCITY_SMOOTH_SAMPLES = 51


@dataclass(frozen=True)
class FrictionSeries:
    """Friction coefficient vs time/position for a whole recording.

    mu is NaN where the finger is off the screen (normal force below the
    contact threshold); valid_mask additionally requires the normal force to
    sit inside the recording's nominal window.
    """

    t: np.ndarray
    x: np.ndarray
    mu: np.ndarray
    valid_mask: np.ndarray

    def __post_init__(self):
        for arr in (self.t, self.x, self.mu, self.valid_mask):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.t.size


@dataclass(frozen=True)
class Swipe:
    """One constant-direction friction segment, canonicalized to ascending x."""

    direction: str  # ltr | rtl (original motion direction)
    x: np.ndarray  # mm, strictly increasing
    mu: np.ndarray
    t: np.ndarray  # seconds; descending when direction == rtl
    mean_speed: float  # mm/s
    trend_corrected: bool = False
    out_of_window_fraction: float = 0.0  # fraction of samples outside the force window

    def __post_init__(self):
        for arr in (self.x, self.mu, self.t):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class TrendModel:
    """Linear position trend of mu, removed as slope_a * (x - pivot)."""

    slope_a: float  # per mm
    pivot: float = TREND_PIVOT_MM
    n_swipes: int = 0

    def __post_init__(self):
        if not abs(self.slope_a) < 0.1:
            raise ValueError(f"implausible trend slope {self.slope_a} per mm")


@dataclass(frozen=True)
class QualityReport:
    cv: float  # coefficient of variation of mu within the swipe
    slip_event_count: int
    accepted: bool
    reject_reason: Optional[str] = None  # stick_slip | too_short | force_out_of_window

    def __post_init__(self):
        if self.accepted != (self.reject_reason is None):
            raise ValueError("accepted must match absence of reject_reason")


def dump_swipes(swipes: Sequence[Swipe], out_dir, prefix: str = "swipe") -> list:
    """Debug dump: one ``x,mu,t`` CSV per swipe, for external plotting."""
    from pathlib import Path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, s in enumerate(swipes):
        path = out_dir / f"{prefix}_{i:03d}.csv"
        rows = "\n".join(
            f"{x:.9g},{mu:.9g},{t:.9g}" for x, mu, t in zip(s.x, s.mu, s.t)
        )
        path.write_text("x,mu,t\n" + rows + "\n", encoding="utf-8")
        paths.append(path)
    return paths


def moving_average(y: np.ndarray, window: int) -> np.ndarray:
    """Centered (zero-phase) moving average; the window shrinks symmetrically
    at the array edges."""
    y = np.asarray(y, dtype=float)
    if window <= 1 or y.size == 0:
        return y.copy()
    half = int(window) // 2
    csum = np.concatenate(([0.0], np.cumsum(y)))
    idx = np.arange(y.size)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, y.size)
    return (csum[hi] - csum[lo]) / (hi - lo)


def compute_friction(
    rec: Recording, contact_threshold: float = CONTACT_THRESHOLD_N
) -> FrictionSeries:
    """mu = |F_T| / F_N wherever the finger is in contact.

    The magnitude convention makes both sliding directions comparable: the
    tangential force opposes motion either way.
    """
    contact = rec.fn >= contact_threshold
    if not contact.any():
        raise AllSamplesInvalid("no sample reaches the contact threshold")
    mu = np.full(len(rec), np.nan)
    mu[contact] = np.abs(rec.ft[contact]) / rec.fn[contact]
    lo, hi = rec.meta.nominal_force_window
    valid = contact & (rec.fn >= lo) & (rec.fn <= hi)
    return FrictionSeries(t=rec.t.copy(), x=rec.x.copy(), mu=mu, valid_mask=valid)


def _monotone_intervals(v: np.ndarray) -> list[tuple[int, int]]:
    """Half-open index intervals over which the velocity keeps one sign."""
    n = v.size
    boundaries = [0]
    prod = v[:-1] * v[1:]
    for i in np.nonzero((prod < 0) | (v[:-1] == 0.0))[0]:
        boundaries.append(int(i) + 1)
    boundaries.append(n)
    return [
        (boundaries[k], boundaries[k + 1])
        for k in range(len(boundaries) - 1)
        if boundaries[k + 1] > boundaries[k]
    ]


def segment_swipes(
    fs: FrictionSeries,
    min_speed_fraction: float = 0.5,
    velocity_smooth_samples: int = VELOCITY_SMOOTH_SAMPLES,
    min_span_mm: float = 1.0,
) -> list[Swipe]:
    """Cut the series into constant-direction swipes.

    Each monotone-motion interval is trimmed to the samples where the speed
    is at least min_speed_fraction of the interval's median speed, dropping
    the turnaround regions. Right-to-left swipes are flipped so x ascends.
    """
    if len(fs) < 3:
        raise NoSwipesFound("series too short")
    v = np.gradient(fs.x, fs.t)
    v_s = moving_average(v, velocity_smooth_samples)
    speed = np.abs(v_s)
    swipes = []
    for s0, s1 in _monotone_intervals(v_s):
        if s1 - s0 < 2:
            continue
        if abs(fs.x[s1 - 1] - fs.x[s0]) < min_span_mm:
            continue
        seg_speed = speed[s0:s1]
        med = float(np.median(seg_speed))
        if med <= 0.0:
            continue
        keep = np.nonzero(seg_speed >= min_speed_fraction * med)[0]
        if keep.size < 2:
            continue
        i0, i1 = s0 + int(keep[0]), s0 + int(keep[-1]) + 1
        swipe = _build_swipe(fs, i0, i1)
        if swipe is not None:
            swipes.append(swipe)
    if not swipes:
        raise NoSwipesFound("no monotone motion above the speed threshold")
    return swipes


def _build_swipe(fs: FrictionSeries, i0: int, i1: int) -> Optional[Swipe]:
    t = fs.t[i0:i1]
    x = fs.x[i0:i1]
    mu = fs.mu[i0:i1]
    valid = fs.valid_mask[i0:i1]
    contact = np.isfinite(mu)
    if contact.sum() < 2:
        return None
    t, x, mu, valid = t[contact], x[contact], mu[contact], valid[contact]
    out_frac = float(1.0 - np.mean(valid))
    direction = "ltr" if x[-1] > x[0] else "rtl"
    if direction == "rtl":
        t, x, mu = t[::-1], x[::-1], mu[::-1]
    # enforce strictly increasing x (drop encoder flats / tiny backtracks)
    keep = np.empty(x.size, dtype=bool)
    keep[0] = True
    keep[1:] = x[1:] > np.maximum.accumulate(x)[:-1]
    t, x, mu = t[keep], x[keep], mu[keep]
    if x.size < 2:
        return None
    span = float(x[-1] - x[0])
    dt = abs(float(t[-1] - t[0]))
    if dt <= 0.0 or span <= 0.0:
        return None
    return Swipe(
        direction=direction,
        x=x.copy(),
        mu=mu.copy(),
        t=t.copy(),
        mean_speed=span / dt,
        trend_corrected=False,
        out_of_window_fraction=out_frac,
    )


def estimate_trend_slope(
    swipes: Sequence[Swipe], pivot: float = TREND_PIVOT_MM, min_samples: int = 10
) -> TrendModel:
    """Mean of per-swipe OLS slopes of mu against position."""
    slopes = []
    for s in swipes:
        if len(s) < min_samples:
            continue
        xm = s.x.mean()
        sxx = float(np.sum((s.x - xm) ** 2))
        if sxx == 0.0:
            continue
        slopes.append(float(np.sum((s.x - xm) * (s.mu - s.mu.mean()))) / sxx)
    if not slopes:
        raise InsufficientData(
            f"no swipe with at least {min_samples} samples and position spread"
        )
    return TrendModel(slope_a=float(np.mean(slopes)), pivot=pivot, n_swipes=len(slopes))


def correct_trend(s: Swipe, m: TrendModel) -> Swipe:
    """Subtract the linear trend slope_a * (x - pivot) from mu."""
    if s.trend_corrected:
        raise AlreadyCorrected("swipe already trend-corrected")
    mu = s.mu - m.slope_a * (s.x - m.pivot)
    return replace(s, mu=mu, trend_corrected=True)


def _count_slip_events(
    t: np.ndarray,
    mu: np.ndarray,
    slip_drop_fraction: float,
    median_window_s: float,
    max_drop_time_s: float,
) -> int:
    n = mu.size
    if n < 3:
        return 0
    if t[0] > t[-1]:  # flipped swipe: restore time order, slips are one-sided
        t, mu = t[::-1], mu[::-1]
    dt = float(np.median(np.abs(np.diff(t))))
    if dt <= 0.0:
        return 0
    win = max(3, int(round(median_window_s / dt)) | 1)
    win = min(win, n if n % 2 == 1 else n - 1)
    local_med = median_filter(mu, size=win, mode="nearest")
    below = mu < (1.0 - slip_drop_fraction) * local_med
    if not below.any():
        return 0
    at_or_above = mu >= local_med
    idx = np.arange(n)
    last_above = np.maximum.accumulate(np.where(at_or_above, idx, -1))
    starts = np.nonzero(below & ~np.concatenate(([False], below[:-1])))[0]
    count = 0
    for i0 in starts:
        j = last_above[i0]
        if j < 0:
            continue
        if abs(float(t[i0] - t[j])) < max_drop_time_s:
            count += 1
    return count


def quality_gate(
    swipes: Sequence[Swipe],
    cv_threshold: float = 0.35,
    slip_drop_fraction: float = 0.4,
    min_samples: int = 20,
    max_out_of_window_fraction: float = 0.5,
    max_slip_events: int = 3,
    slip_median_window_s: float = 0.080,
    slip_max_drop_time_s: float = 0.020,
) -> list[QualityReport]:
    """Per-swipe accept/reject decision.

    A swipe is a stick-slip reject when the coefficient of variation of mu
    exceeds cv_threshold or when more than max_slip_events sharp drops
    (deeper than slip_drop_fraction of the local median, falling within
    slip_max_drop_time_s) occur.
    """
    reports = []
    for s in swipes:
        if len(s) < min_samples:
            reports.append(
                QualityReport(cv=float("nan"), slip_event_count=0, accepted=False,
                              reject_reason="too_short")
            )
            continue
        if s.out_of_window_fraction > max_out_of_window_fraction:
            reports.append(
                QualityReport(cv=float("nan"), slip_event_count=0, accepted=False,
                              reject_reason="force_out_of_window")
            )
            continue
        mean = float(s.mu.mean())
        std = float(s.mu.std(ddof=1))
        cv = std / mean if mean > 0 else float("inf")
        slips = _count_slip_events(
            s.t, s.mu, slip_drop_fraction, slip_median_window_s, slip_max_drop_time_s
        )
        if cv > cv_threshold or slips > max_slip_events:
            reports.append(
                QualityReport(cv=cv, slip_event_count=slips, accepted=False,
                              reject_reason="stick_slip")
            )
        else:
            reports.append(
                QualityReport(cv=cv, slip_event_count=slips, accepted=True)
            )
    return reports
