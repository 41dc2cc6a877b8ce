"""Physical comparison metrics: constant friction levels, their variability
descriptors, and the friction range with its perception-oriented variants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import NoAcceptedSwipes, ParticipantSetMismatch
from .swipes import Swipe


@dataclass(frozen=True)
class FrictionLevelStats:
    """Descriptors of one constant friction level (highest or lowest).

    mean_mu            grand mean of per-participant mean friction
    intra_trial_std_delta   mean within-swipe standard deviation (flatness)
    inter_participant_std_sigma  spread of per-participant means (consistency)
    """

    mean_mu: float
    intra_trial_std_delta: float
    inter_participant_std_sigma: float
    n_swipes: int
    n_participants: int
    per_participant_means: dict[str, float] = field(default_factory=dict)
    per_participant_swipe_means: dict[str, list[float]] = field(default_factory=dict)


@dataclass(frozen=True)
class FrictionRangeStats:
    """Friction range between levels, plus scale-free variants.

    relative_range is mu_H / mu_L and friction_contrast is 1 - mu_L / mu_H;
    either is None when its denominator level is zero (flagged, not fatal).
    per_trial_samples holds the paired per-repetition range values that feed
    the cross-device t/F tests.
    """

    delta_mu: float
    relative_range: Optional[float]
    friction_contrast: Optional[float]
    inter_participant_std: float
    per_trial_samples: list[float]
    n_pairs: int
    n_participants: int


def friction_level_stats(
    swipes_by_participant: Mapping[str, Sequence[Swipe]]
) -> FrictionLevelStats:
    """Aggregate accepted, trend-corrected swipes of one actuation level.

    The per-participant mean is the mean of swipe means, so participants with
    more accepted swipes do not dominate the spread estimate. Standard
    deviations are sample (n-1) estimates throughout.
    """
    per_means: dict[str, float] = {}
    per_swipe_means: dict[str, list[float]] = {}
    within_stds = []
    n_swipes = 0
    for pid in sorted(swipes_by_participant):
        swipes = swipes_by_participant[pid]
        if not swipes:
            continue
        means = [float(s.mu.mean()) for s in swipes]
        per_swipe_means[pid] = means
        per_means[pid] = float(np.mean(means))
        within_stds.extend(
            float(s.mu.std(ddof=1)) for s in swipes if len(s) > 1
        )
        n_swipes += len(swipes)
    if not per_means:
        raise NoAcceptedSwipes("no participant has an accepted swipe")
    participant_means = np.array(list(per_means.values()))
    sigma = float(participant_means.std(ddof=1)) if participant_means.size > 1 else 0.0
    delta = float(np.mean(within_stds)) if within_stds else 0.0
    return FrictionLevelStats(
        mean_mu=float(participant_means.mean()),
        intra_trial_std_delta=delta,
        inter_participant_std_sigma=sigma,
        n_swipes=n_swipes,
        n_participants=len(per_means),
        per_participant_means=per_means,
        per_participant_swipe_means=per_swipe_means,
    )


def friction_range(
    high: FrictionLevelStats,
    low: FrictionLevelStats,
    pairing: Optional[Mapping[str, Sequence[tuple[int, int]]]] = None,
) -> FrictionRangeStats:
    """Friction range between the highest and lowest constant levels.

    Per-repetition range samples pair repetition k of the high level with
    repetition k of the low level within each participant; an explicit
    pairing map of (high_index, low_index) tuples per participant overrides
    the default index pairing.
    """
    high_pids = set(high.per_participant_swipe_means)
    low_pids = set(low.per_participant_swipe_means)
    if high_pids != low_pids:
        raise ParticipantSetMismatch(
            f"participants differ between levels: {sorted(high_pids ^ low_pids)}"
        )
    per_trial: list[float] = []
    per_participant_delta: list[float] = []
    for pid in sorted(high_pids):
        h_means = high.per_participant_swipe_means[pid]
        l_means = low.per_participant_swipe_means[pid]
        if pairing is not None:
            pairs = [
                h_means[i] - l_means[j]
                for i, j in pairing.get(pid, [])
                if i < len(h_means) and j < len(l_means)
            ]
        else:
            pairs = [h - l for h, l in zip(h_means, l_means)]
        if pairs:
            per_trial.extend(pairs)
            per_participant_delta.append(float(np.mean(pairs)))
    delta_mu = high.mean_mu - low.mean_mu
    relative = high.mean_mu / low.mean_mu if low.mean_mu != 0.0 else None
    contrast = 1.0 - low.mean_mu / high.mean_mu if high.mean_mu != 0.0 else None
    spread = (
        float(np.std(per_participant_delta, ddof=1))
        if len(per_participant_delta) > 1
        else 0.0
    )
    return FrictionRangeStats(
        delta_mu=delta_mu,
        relative_range=relative,
        friction_contrast=contrast,
        inter_participant_std=spread,
        per_trial_samples=per_trial,
        n_pairs=len(per_trial),
        n_participants=len(per_participant_delta),
    )
