"""Dataset-level analysis: from a directory (or list) of recordings to the
physical metrics of one tablet, and from pointing logs to behavioral metrics.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import fitts as fitts_mod
from .errors import HaptibenchError, InsufficientData, NoAcceptedSwipes
from .friction import FrictionLevelStats, FrictionRangeStats, friction_level_stats, friction_range
from .io import PointingTrial, Recording, read_recording
from .latency import LatencyEstimate, RidgeSpec, estimate_latency
from .swipes import (
    Swipe,
    TrendModel,
    compute_friction,
    correct_trend,
    estimate_trend_slope,
    quality_gate,
    segment_swipes,
)


@dataclass(frozen=True)
class PipelineConfig:
    """Tunables of the physical pipeline, with their documented defaults."""

    contact_threshold: float = 0.1  # N
    min_speed_fraction: float = 0.5
    velocity_smooth_samples: int = 51
    min_span_mm: float = 1.0
    cv_threshold: float = 0.35
    slip_drop_fraction: float = 0.4
    min_samples: int = 20
    max_out_of_window_fraction: float = 0.5
    max_slip_events: int = 3
    trend_pivot: float = 50.0  # mm
    latency_smoothing_s: float = 0.005
    latency_search_window_s: float = 0.300
    noise_floor_factor: float = 5.0
    max_reject_fraction: float = 0.5  # participant-condition discard threshold
    ridge_polarity: Optional[str] = None  # inferred from friction levels if None


@dataclass(frozen=True)
class QualitySummary:
    n_recordings: int
    n_swipes: int
    n_accepted: int
    rejects_by_reason: dict[str, int]
    dropped_participant_conditions: list[tuple[str, str]]


@dataclass(frozen=True)
class PhysicalAnalysis:
    tablet_id: str
    mu_high: FrictionLevelStats
    mu_low: FrictionLevelStats
    frange: FrictionRangeStats
    latency: Optional[LatencyEstimate]
    trend: TrendModel
    high_condition: str  # which actuation condition carries the higher level
    quality: QualitySummary


@dataclass(frozen=True)
class _TaggedSwipes:
    tablet_id: str
    participant_id: str
    actuation: str
    session_index: int
    trial_index: int
    ridge_span: Optional[tuple[float, float]]
    swipes: list[Swipe]


def _extract_swipes(rec: Recording, config: PipelineConfig) -> _TaggedSwipes:
    fs = compute_friction(rec, contact_threshold=config.contact_threshold)
    swipes = segment_swipes(
        fs,
        min_speed_fraction=config.min_speed_fraction,
        velocity_smooth_samples=config.velocity_smooth_samples,
        min_span_mm=config.min_span_mm,
    )
    m = rec.meta
    return _TaggedSwipes(
        m.tablet_id, m.participant_id, m.actuation, m.session_index, m.trial_index,
        m.ridge_span, swipes,
    )


def _extract_from_path(args: tuple[str, PipelineConfig]) -> _TaggedSwipes:
    path, config = args
    return _extract_swipes(read_recording(Path(path)), config)


def analyze_physical_recordings(
    recordings: Iterable[Recording],
    config: PipelineConfig = PipelineConfig(),
) -> PhysicalAnalysis:
    """Run the full physical pipeline over in-memory recordings."""
    tagged = [_extract_swipes(rec, config) for rec in recordings]
    return _analyze_tagged(tagged, config)


def analyze_physical_paths(
    paths: Sequence[Path],
    config: PipelineConfig = PipelineConfig(),
    jobs: int = 1,
) -> PhysicalAnalysis:
    """Run the physical pipeline over recording files.

    With jobs > 1 the per-recording parse/segment stage fans out to worker
    processes; results are re-sorted so the outcome is order-independent.
    """
    paths = [str(p) for p in paths]
    if jobs > 1 and len(paths) > 4:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            tagged = list(pool.map(_extract_from_path, [(p, config) for p in paths],
                                   chunksize=max(1, len(paths) // (4 * jobs))))
    else:
        tagged = [_extract_from_path((p, config)) for p in paths]
    return _analyze_tagged(tagged, config)


def _analyze_tagged(tagged: list[_TaggedSwipes], config: PipelineConfig) -> PhysicalAnalysis:
    tagged = sorted(
        tagged, key=lambda tg: (tg.participant_id, tg.actuation, tg.session_index, tg.trial_index)
    )
    constant = [tg for tg in tagged if tg.actuation in ("off", "constant_max")]
    ridge_tagged = [tg for tg in tagged if tg.actuation == "ridge"]
    if not constant:
        raise InsufficientData("no constant-actuation recordings")

    # the trend fit uses swipes that already look clean; stick-slip swipes
    # carry wild per-swipe slopes, and the gate criteria barely react to the
    # small linear trend itself, so a pre-gate on uncorrected swipes is safe
    all_constant_swipes = [s for tg in constant for s in tg.swipes]
    pre_reports = quality_gate(
        all_constant_swipes,
        cv_threshold=config.cv_threshold,
        slip_drop_fraction=config.slip_drop_fraction,
        min_samples=config.min_samples,
        max_out_of_window_fraction=config.max_out_of_window_fraction,
        max_slip_events=config.max_slip_events,
    )
    clean = [s for s, r in zip(all_constant_swipes, pre_reports) if r.accepted]
    trend = estimate_trend_slope(
        clean if clean else all_constant_swipes, pivot=config.trend_pivot
    )

    # correct, gate, and bucket accepted swipes per (participant, condition)
    buckets: dict[tuple[str, str], list[Swipe]] = {}
    counts: dict[tuple[str, str], list[int]] = {}
    reject_reasons: Counter = Counter()
    n_swipes = 0
    for tg in constant:
        corrected = [correct_trend(s, trend) for s in tg.swipes]
        reports = quality_gate(
            corrected,
            cv_threshold=config.cv_threshold,
            slip_drop_fraction=config.slip_drop_fraction,
            min_samples=config.min_samples,
            max_out_of_window_fraction=config.max_out_of_window_fraction,
            max_slip_events=config.max_slip_events,
        )
        key = (tg.participant_id, tg.actuation)
        buckets.setdefault(key, [])
        counts.setdefault(key, [0, 0])
        for swipe, rep in zip(corrected, reports):
            n_swipes += 1
            counts[key][1] += 1
            if rep.accepted:
                buckets[key].append(swipe)
                counts[key][0] += 1
            else:
                reject_reasons[rep.reject_reason] += 1

    dropped = []
    for key, (acc, total) in counts.items():
        if total and 1.0 - acc / total > config.max_reject_fraction:
            dropped.append(key)
            buckets[key] = []
    # a participant leaves the comparison entirely if either condition lost
    ok_pids = [
        pid
        for pid in sorted({k[0] for k in counts})
        if buckets.get((pid, "off")) and buckets.get((pid, "constant_max"))
    ]
    if not ok_pids:
        raise NoAcceptedSwipes("no participant with accepted swipes in both conditions")
    by_cond = {
        cond: {pid: buckets[(pid, cond)] for pid in ok_pids}
        for cond in ("off", "constant_max")
    }
    stats_off = friction_level_stats(by_cond["off"])
    stats_act = friction_level_stats(by_cond["constant_max"])
    if stats_act.mean_mu >= stats_off.mean_mu:
        high, low, high_condition = stats_act, stats_off, "constant_max"
    else:
        high, low, high_condition = stats_off, stats_act, "off"
    frange = friction_range(high, low)

    latency = None
    if ridge_tagged:
        spans = {
            tuple(np.round(tg.ridge_span, 6))
            for tg in ridge_tagged
            if tg.ridge_span is not None
        }
        if len(spans) != 1:
            raise HaptibenchError(f"ridge recordings disagree on the span: {spans}")
        span = next(iter(spans))
        polarity = config.ridge_polarity or (
            "friction_up" if high_condition == "constant_max" else "friction_down"
        )
        ridge = RidgeSpec(x_lo=span[0], x_hi=span[1], polarity=polarity)
        ridge_swipes = [s for tg in ridge_tagged for s in tg.swipes]
        latency = estimate_latency(
            ridge_swipes,
            ridge,
            smoothing_window=config.latency_smoothing_s,
            search_window=config.latency_search_window_s,
            noise_floor_factor=config.noise_floor_factor,
        )

    tablet_ids = sorted({tg.tablet_id for tg in tagged})
    if len(tablet_ids) != 1:
        raise HaptibenchError(f"recordings mix tablet ids: {tablet_ids}")
    quality = QualitySummary(
        n_recordings=len(tagged),
        n_swipes=n_swipes,
        n_accepted=sum(c[0] for c in counts.values()),
        rejects_by_reason=dict(sorted(reject_reasons.items())),
        dropped_participant_conditions=sorted(dropped),
    )
    return PhysicalAnalysis(
        tablet_id=tablet_ids[0],
        mu_high=high,
        mu_low=low,
        frange=frange,
        latency=latency,
        trend=trend,
        high_condition=high_condition,
        quality=quality,
    )


def physical_metrics_dict(analysis: PhysicalAnalysis) -> dict:
    """JSON-ready physical metrics fragment (one tablet)."""

    def level_row(st: FrictionLevelStats) -> dict:
        return {
            "mean": st.mean_mu,
            "inter_participant_std": st.inter_participant_std_sigma,
            "intra_trial_std": st.intra_trial_std_delta,
            "n_swipes": st.n_swipes,
            "n_participants": st.n_participants,
        }

    fr = analysis.frange
    out = {
        "mu_high": level_row(analysis.mu_high),
        "mu_low": level_row(analysis.mu_low),
        "friction_range": {
            "mean": fr.delta_mu,
            "inter_participant_std": fr.inter_participant_std,
            "relative_range": fr.relative_range,
            "friction_contrast": fr.friction_contrast,
            "n_pairs": fr.n_pairs,
            "n_participants": fr.n_participants,
            "per_trial_samples": list(fr.per_trial_samples),
        },
        "high_condition": analysis.high_condition,
        "trend_slope_per_mm": analysis.trend.slope_a,
        "quality": {
            "n_recordings": analysis.quality.n_recordings,
            "n_swipes": analysis.quality.n_swipes,
            "n_accepted": analysis.quality.n_accepted,
            "rejects_by_reason": analysis.quality.rejects_by_reason,
            "dropped_participant_conditions": [
                list(k) for k in analysis.quality.dropped_participant_conditions
            ],
        },
    }
    if analysis.latency is not None:
        lat = analysis.latency
        out["latency"] = {
            "mean_s": lat.mean_dt,
            "std_s": lat.std_dt,
            "n": lat.n,
            "per_direction": {
                d: {"mean_s": m, "std_s": s, "n": n}
                for d, (m, s, n) in sorted(lat.per_direction.items())
            },
        }
    else:
        out["latency"] = None
    return out


def pointing_metrics_dict(trials: Sequence[PointingTrial]) -> dict:
    """JSON-ready behavioral metrics fragment, keyed by haptic condition."""
    groups = fitts_mod.split_by_condition(trials)
    out: dict[str, dict] = {}
    for key in sorted(groups, key=lambda k: (k.tablet_id, k.haptic)):
        pm = fitts_mod.pointing_metrics(groups[key], key)
        out.setdefault(key.tablet_id, {})["haptic" if key.haptic else "no_haptic"] = {
            "slope_mean": pm.slope_mean,
            "slope_std": pm.slope_std,
            "per_participant_slopes": pm.per_participant_slopes,
            "mt_hardest_mean": pm.mt_hardest_mean,
            "mt_hardest_std": pm.mt_hardest_std,
            "mt_hardest_samples": pm.mt_hardest_samples,
            "hardest_id": pm.hardest_id,
            "error_rate": pm.error_rate,
            "n_trials": pm.n_trials,
            "n_participants": pm.n_participants,
        }
    return out
