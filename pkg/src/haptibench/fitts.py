"""Behavioral metrics from pointing-task logs: difficulty indexes, movement
times, the movement-time-vs-difficulty regression, and error rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateDesign, EmptyCondition, NonPositiveGeometry
from .io import PointingTrial
from .stats import linear_regression


@dataclass(frozen=True)
class ConditionKey:
    tablet_id: str
    haptic: bool


@dataclass(frozen=True)
class FittsFit:
    """Linear fit MT = intercept_a + slope_b * ID."""

    intercept_a: float  # ms
    slope_b: float  # ms per bit
    r_squared: float
    n_points: int


@dataclass(frozen=True)
class PointingMetrics:
    per_participant_slopes: list[float]  # ms/bit, ordered by participant id
    slope_mean: float
    slope_std: float
    mt_hardest_mean: float  # ms, pooled raw trials at the hardest difficulty
    mt_hardest_std: float
    mt_hardest_samples: list[float]
    hardest_id: float  # bits
    error_rate: float
    n_trials: int
    n_participants: int


def index_of_difficulty(d: float, w: float) -> float:
    """Shannon difficulty index log2(D/W + 1) in bits."""
    if not (d > 0 and w > 0):
        raise NonPositiveGeometry(f"need positive distance and width, got D={d}, W={w}")
    return math.log2(d / w + 1.0)


def _condition_trials(
    trials: Sequence[PointingTrial], key: ConditionKey
) -> list[PointingTrial]:
    sel = [tr for tr in trials if tr.tablet_id == key.tablet_id and tr.haptic == key.haptic]
    if not sel:
        raise EmptyCondition(f"no trials for tablet={key.tablet_id!r} haptic={key.haptic}")
    return sel


def aggregate_movement_times(
    trials: Sequence[PointingTrial], key: ConditionKey
) -> dict[str, dict[float, float]]:
    """Per participant and difficulty index, the mean movement time (ms)
    across that participant's successful repetitions. Error trials are left
    out of the averages; they still count toward the error rate elsewhere."""
    sel = _condition_trials(trials, key)
    sums: dict[str, dict[float, list[float]]] = {}
    for tr in sel:
        if not tr.success:
            continue
        idx = index_of_difficulty(tr.distance_d, tr.width_w)
        sums.setdefault(tr.participant_id, {}).setdefault(idx, []).append(tr.movement_time)
    return {
        pid: {idx: float(np.mean(mts)) for idx, mts in sorted(by_id.items())}
        for pid, by_id in sorted(sums.items())
    }


def fitts_fit(points: Sequence[tuple[float, float]]) -> FittsFit:
    """OLS regression of mean movement time on difficulty index."""
    if len(points) < 2:
        raise DegenerateDesign("need at least 2 (ID, MT) points")
    ids = [p[0] for p in points]
    mts = [p[1] for p in points]
    if len(set(ids)) < 2:
        raise DegenerateDesign("all difficulty indexes are equal")
    res = linear_regression(ids, mts)
    return FittsFit(
        intercept_a=res.intercept,
        slope_b=res.slope,
        r_squared=res.r_squared,
        n_points=res.n,
    )


def error_rate(trials: Sequence[PointingTrial]) -> float:
    """Fraction of trials released outside the target."""
    if not trials:
        raise EmptyCondition("no trials")
    failures = sum(1 for tr in trials if not tr.success)
    return failures / len(trials)


def pointing_metrics(trials: Sequence[PointingTrial], key: ConditionKey) -> PointingMetrics:
    """Condition-level behavioral summary.

    The regression slope is fit per participant and then averaged (the
    participant is the unit of analysis); movement time at the hardest
    difficulty pools the raw trials of every participant.
    """
    sel = _condition_trials(trials, key)
    per_participant = aggregate_movement_times(trials, key)
    slopes = []
    for pid in sorted(per_participant):
        points = sorted(per_participant[pid].items())
        if len(points) < 2:
            continue
        slopes.append(fitts_fit(points).slope_b)
    if not slopes:
        raise DegenerateDesign("no participant covers two difficulty indexes")
    hardest = max(
        index_of_difficulty(tr.distance_d, tr.width_w) for tr in sel
    )
    mt_hardest = [
        tr.movement_time
        for tr in sel
        if math.isclose(index_of_difficulty(tr.distance_d, tr.width_w), hardest)
    ]
    slope_arr = np.array(slopes)
    mt_arr = np.array(mt_hardest)
    return PointingMetrics(
        per_participant_slopes=[float(s) for s in slopes],
        slope_mean=float(slope_arr.mean()),
        slope_std=float(slope_arr.std(ddof=1)) if slope_arr.size > 1 else 0.0,
        mt_hardest_mean=float(mt_arr.mean()),
        mt_hardest_std=float(mt_arr.std(ddof=1)) if mt_arr.size > 1 else 0.0,
        mt_hardest_samples=[float(v) for v in mt_hardest],
        hardest_id=float(hardest),
        error_rate=error_rate(sel),
        n_trials=len(sel),
        n_participants=len(slopes),
    )


def split_by_condition(
    trials: Sequence[PointingTrial],
) -> dict[ConditionKey, list[PointingTrial]]:
    """Group trials by (tablet, haptic) condition."""
    groups: dict[ConditionKey, list[PointingTrial]] = {}
    for tr in trials:
        groups.setdefault(ConditionKey(tr.tablet_id, tr.haptic), []).append(tr)
    return groups
