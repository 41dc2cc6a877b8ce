"""Deterministic simulator of haptic-tablet recordings and pointing sessions.

Every generator is a pure function of (spec, params, seed) built on the
counter-based Philox generator, so identical inputs reproduce identical
datasets bit for bit. Event logs carry the ground truth (reversal times,
ridge crossings, actuation onsets) that the analysis pipeline is checked
against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace, asdict
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from .errors import InvalidSpec
from .io import (
    PointingTrial,
    Recording,
    RecordingMeta,
    write_pointing_log,
    write_recording,
)
from .latency import RidgeSpec
from .swipes import moving_average

TECHNOLOGIES = ("ultrasonic", "electroadhesion")


@dataclass(frozen=True)
class SpatialPattern:
    """Standing-wave friction profile under actuation: amplitude *
    cos(2*pi*x/wavelength + phase)."""

    amplitude: float
    wavelength: float  # mm
    phase: float = 0.0  # rad

    def __post_init__(self):
        if self.wavelength <= 0:
            raise InvalidSpec("wavelength must be positive")

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.amplitude * np.cos(2.0 * np.pi * x / self.wavelength + self.phase)


@dataclass(frozen=True)
class StickSlipSpec:
    enabled: bool = False
    drop_fraction: float = 0.5  # fractional friction drop at each slip
    period_s: float = 0.100
    recovery_fraction: float = 0.35  # fraction of the period spent recovering


RESPONSE_SHAPES = ("raised_cosine", "first_order")


@dataclass(frozen=True)
class SimTabletSpec:
    """Forward model of one tablet's friction behavior.

    The actuation response to a ridge command is a pure delay followed by
    either a symmetric raised-cosine rise of duration response_time_constant
    (inflection exactly at its midpoint, which is what the latency detector
    locates) or a first-order lag (inflection at the response start, and an
    asymmetric shape that a zero-phase smoother shifts late by half its
    window).
    """

    technology: str  # ultrasonic | electroadhesion
    mu_base: float  # friction without actuation
    mu_actuated_mean: float  # friction under constant maximal actuation
    spatial_pattern: Optional[SpatialPattern] = None
    latency_delay: float = 0.0  # s, pure delay from tracking to actuation
    response_time_constant: float = 0.004  # s, actuation rise time
    response_shape: str = "raised_cosine"
    noise_std: float = 0.0  # dimensionless, additive on mu
    stick_slip: StickSlipSpec = field(default_factory=StickSlipSpec)
    trend_slope: float = 0.0  # per mm, injected sensor-crosstalk trend

    def __post_init__(self):
        if self.technology not in TECHNOLOGIES:
            raise InvalidSpec(f"unknown technology {self.technology!r}")
        if self.mu_base <= 0 or self.mu_actuated_mean <= 0:
            raise InvalidSpec("friction levels must be positive")
        if self.latency_delay < 0:
            raise InvalidSpec("latency_delay must be non-negative")
        if self.response_time_constant <= 0:
            raise InvalidSpec("response_time_constant must be positive")
        if self.response_shape not in RESPONSE_SHAPES:
            raise InvalidSpec(f"response_shape must be one of {RESPONSE_SHAPES}")

    @property
    def response_midpoint(self) -> float:
        """Offset from response start to its detectable inflection."""
        if self.response_shape == "raised_cosine":
            return self.response_time_constant / 2.0
        return 0.0

    @property
    def mu_high_true(self) -> float:
        return max(self.mu_base, self.mu_actuated_mean)

    @property
    def mu_low_true(self) -> float:
        return min(self.mu_base, self.mu_actuated_mean)

    @property
    def ridge_polarity(self) -> str:
        return "friction_up" if self.mu_actuated_mean > self.mu_base else "friction_down"


@dataclass(frozen=True)
class SimSwipeParams:
    speed: float = 100.0  # mm/s
    duration: float = 10.0  # s
    n_swipes: int = 6
    force_window: tuple[float, float] = (0.5, 1.5)  # N
    seed: int = 0
    sample_rate: float = 10_000.0  # Hz
    screen_length: float = 100.0  # mm
    turnaround_smooth_s: float = 0.060  # corner-rounding window
    start_direction: str = "ltr"

    def __post_init__(self):
        if self.speed <= 0 or self.n_swipes < 1:
            raise InvalidSpec("need positive speed and at least one swipe")
        if self.sample_rate <= 0 or self.duration <= 0:
            raise InvalidSpec("need positive duration and sample rate")
        if self.start_direction not in ("ltr", "rtl"):
            raise InvalidSpec("start_direction must be ltr or rtl")


@dataclass(frozen=True)
class SimEventLog:
    """Ground-truth timing of one simulated recording.

    actuation_onset_times are crossing + latency_delay + response midpoint:
    the instant where the friction derivative extremum sits, i.e. what the
    latency detector is expected to find.
    """

    reversal_times: list[float]
    ridge_crossing_times: list[float]
    actuation_onset_times: list[float]
    leg_windows: list[tuple[float, float, str]]  # (t_start, t_end, direction)


def _rng(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator keyed on (seed, stream indices); counter-based, so
    reproducible across platforms."""
    key = int(seed) & ((1 << 64) - 1)
    for part in stream:
        key = (key << 16) ^ (int(part) & 0xFFFF) ^ (key >> 48)
        key &= (1 << 128) - 1
    return np.random.Generator(np.random.Philox(key=key))


def _trajectory(params: SimSwipeParams) -> tuple[np.ndarray, np.ndarray, SimEventLog]:
    """Keyframed dwell/leg trajectory smoothed with a zero-phase window.

    Legs sweep the full screen at constant speed; the remaining time is
    spread over dwells at both ends and between legs.
    """
    span = params.screen_length
    leg_time = span / params.speed
    motion_total = params.n_swipes * leg_time
    dwell_total = params.duration - motion_total
    if dwell_total < 0:
        raise InvalidSpec(
            f"duration {params.duration}s too short for {params.n_swipes} swipes "
            f"of {leg_time:.3f}s"
        )
    dwell = dwell_total / (params.n_swipes + 1)
    lo, hi = 0.0, span
    pos0 = lo if params.start_direction == "ltr" else hi

    key_t = [0.0]
    key_x = [pos0]
    legs: list[tuple[float, float, str]] = []
    t_cursor = dwell
    x_cursor = pos0
    for k in range(params.n_swipes):
        direction = "ltr" if (params.start_direction == "ltr") == (k % 2 == 0) else "rtl"
        x_next = hi if direction == "ltr" else lo
        key_t.extend([t_cursor, t_cursor + leg_time])
        key_x.extend([x_cursor, x_next])
        legs.append((t_cursor, t_cursor + leg_time, direction))
        t_cursor += leg_time + dwell
        x_cursor = x_next
    key_t.append(params.duration)
    key_x.append(x_cursor)

    n = int(round(params.duration * params.sample_rate))
    t = np.arange(n) / params.sample_rate
    x_raw = np.interp(t, key_t, key_x)
    win = max(1, int(round(params.turnaround_smooth_s * params.sample_rate)) | 1)
    # the moving average is a convex combination of in-range values; clipping
    # only removes accumulated float dust at the extremes
    x = np.clip(moving_average(x_raw, win), lo, hi)

    reversals = [
        (legs[k][1] + legs[k + 1][0]) / 2.0 for k in range(len(legs) - 1)
    ]
    log = SimEventLog(
        reversal_times=reversals,
        ridge_crossing_times=[],
        actuation_onset_times=[],
        leg_windows=legs,
    )
    return t, x, log


def _crossing_times(t: np.ndarray, x: np.ndarray, ridge: RidgeSpec) -> list[float]:
    """Interpolated times at which the trajectory crosses the ridge's leading
    edge, for either travel direction."""
    times = []
    for edge, rising in ((ridge.x_lo, True), (ridge.x_hi, False)):
        if rising:
            hits = np.nonzero((x[:-1] < edge) & (x[1:] >= edge))[0]
        else:
            hits = np.nonzero((x[:-1] > edge) & (x[1:] <= edge))[0]
        for i in hits:
            frac = (edge - x[i]) / (x[i + 1] - x[i])
            times.append(float(t[i] + frac * (t[i + 1] - t[i])))
    return sorted(times)


def _first_order_response(target: np.ndarray, dt: float, tau: float) -> np.ndarray:
    alpha = np.exp(-dt / tau)
    y, _ = lfilter([1.0 - alpha], [1.0, -alpha], target, zi=[alpha * target[0]])
    return y


def _raised_cosine_response(target: np.ndarray, dt: float, rise_time: float) -> np.ndarray:
    """Causal raised-cosine step response: a switch ramps smoothly over
    rise_time with its inflection at the midpoint."""
    k_n = max(1, int(round(rise_time / dt)))
    if k_n == 1:
        return target.copy()
    kernel = 1.0 - np.cos(2.0 * np.pi * (np.arange(k_n) + 0.5) / k_n)
    kernel /= kernel.sum()
    padded = np.concatenate([np.full(k_n - 1, target[0]), target])
    return np.convolve(padded, kernel, mode="valid")


def simulate_swipe_recording(
    spec: SimTabletSpec,
    params: SimSwipeParams,
    ridge: Optional[RidgeSpec] = None,
    actuation: Optional[str] = None,
    participant_id: str = "p00",
    tablet_id: str = "sim",
    session_index: int = 0,
    trial_index: int = 0,
) -> tuple[Recording, SimEventLog]:
    """One simulated exploration: triangle-wave motion, normal-force random
    walk inside the force window, and a friction field driven by the
    actuation condition.

    actuation defaults to 'ridge' when a ridge is given, else 'constant_max'.
    """
    if actuation is None:
        actuation = "ridge" if ridge is not None else "constant_max"
    if actuation == "ridge" and ridge is None:
        raise InvalidSpec("ridge actuation needs a RidgeSpec")

    t, x, log = _trajectory(params)
    n = t.size
    dt = 1.0 / params.sample_rate
    rng = _rng(params.seed, 0xA5)

    # normal force: mean-reverting walk clipped to the window
    lo, hi = params.force_window
    center, spread = (lo + hi) / 2.0, (hi - lo) / 2.0
    theta, sigma_w = 1.5, 0.35
    noise = rng.normal(0.0, sigma_w * np.sqrt(dt), n)
    decay = 1.0 - theta * dt
    walk, _ = lfilter([1.0], [1.0, -decay], noise, zi=[decay * 0.0])
    fn = np.clip(center + walk, lo + 0.02 * spread, hi - 0.02 * spread)

    # target friction level vs time
    if actuation == "off":
        target = np.full(n, spec.mu_base)
        mu = target
    elif actuation == "constant_max":
        target = np.full(n, spec.mu_actuated_mean)
        if spec.technology == "ultrasonic" and spec.spatial_pattern is not None:
            target = target + spec.spatial_pattern.evaluate(x)
        mu = target  # steady state: constant actuation has no transient left
    else:
        crossings = _crossing_times(t, x, ridge)
        occupied = (x >= ridge.x_lo) & (x <= ridge.x_hi)
        shift = int(round(spec.latency_delay * params.sample_rate))
        cmd = np.zeros(n, dtype=bool)
        cmd[shift:] = occupied[: n - shift] if shift > 0 else occupied
        act_level = np.full(n, spec.mu_actuated_mean)
        if spec.technology == "ultrasonic" and spec.spatial_pattern is not None:
            act_level = act_level + spec.spatial_pattern.evaluate(x)
        target = np.where(cmd, act_level, spec.mu_base)
        if spec.response_shape == "raised_cosine":
            mu = _raised_cosine_response(target, dt, spec.response_time_constant)
        else:
            mu = _first_order_response(target, dt, spec.response_time_constant)
        onset_offset = spec.latency_delay + spec.response_midpoint
        log = replace(
            log,
            ridge_crossing_times=crossings,
            actuation_onset_times=[c + onset_offset for c in crossings],
        )

    mu = mu + spec.trend_slope * (x - 50.0)
    if spec.stick_slip.enabled:
        ss = spec.stick_slip
        phase = np.mod(t, ss.period_s) / ss.period_s
        rec = max(ss.recovery_fraction, 1e-6)
        mult = np.where(phase < rec, 1.0 - ss.drop_fraction * (1.0 - phase / rec), 1.0)
        mu = mu * mult
    if spec.noise_std > 0:
        mu = mu + rng.normal(0.0, spec.noise_std, n)

    v = np.gradient(x, t)
    ft = mu * fn * np.sign(v)

    meta = RecordingMeta(
        participant_id=participant_id,
        tablet_id=tablet_id,
        actuation=actuation,
        nominal_speed=params.speed,
        nominal_force_window=params.force_window,
        screen_length=params.screen_length,
        sample_rate=params.sample_rate,
        session_index=session_index,
        trial_index=trial_index,
        ridge_span=(ridge.x_lo, ridge.x_hi) if actuation == "ridge" else None,
    )
    rec = Recording(meta=meta, t=t, fn=fn, ft=ft, x=x)
    return rec, log


@dataclass(frozen=True)
class PhysicalProtocol:
    """Session layout: repetitions per participant for each constant
    condition, plus ridge trials for the latency estimate."""

    participants: int = 6
    trials_per_participant: int = 18
    ridge_trials_per_participant: int = 2
    inter_participant_mu_std: float = 0.0
    per_rep_mu_std: float = 0.0
    ridge_span: tuple[float, float] = (49.0, 51.0)
    swipe: SimSwipeParams = field(
        default_factory=lambda: SimSwipeParams(duration=2.0, n_swipes=1)
    )

    def __post_init__(self):
        if self.participants < 1 or self.trials_per_participant < 1:
            raise InvalidSpec("need at least one participant and one trial")


@dataclass
class PhysicalSessionData:
    tablet_id: str
    recordings: list[tuple[Recording, SimEventLog]]
    ground_truth: dict
    out_dir: Optional[Path] = None


def simulate_physical_session(
    spec: SimTabletSpec,
    protocol: PhysicalProtocol,
    seed: int,
    tablet_id: str = "sim",
    out_dir: Optional[Path] = None,
) -> PhysicalSessionData:
    """Full physical-measurement dataset for one tablet.

    Per-participant friction offsets are drawn once per condition (finger
    mechanics shift the unactuated and actuated levels independently), and
    per-repetition offsets model swipe-to-swipe drift. When out_dir is given
    the recordings, sidecars, and a ground_truth.json manifest are written.
    """
    off_rng = _rng(seed, 0x0F)
    p_off = off_rng.normal(0.0, protocol.inter_participant_mu_std, (protocol.participants, 2))
    rep_off = off_rng.normal(
        0.0, protocol.per_rep_mu_std,
        (protocol.participants, 2, protocol.trials_per_participant),
    )

    conditions = ("off", "constant_max")
    recordings: list[tuple[Recording, SimEventLog]] = []
    entries = []
    ridge = RidgeSpec(
        x_lo=protocol.ridge_span[0],
        x_hi=protocol.ridge_span[1],
        polarity=spec.ridge_polarity,
    )
    for p in range(protocol.participants):
        pid = f"p{p:02d}"
        for c_idx, condition in enumerate(conditions):
            for k in range(protocol.trials_per_participant):
                # floor keeps extreme offset draws physically meaningful
                spec_k = replace(
                    spec,
                    mu_base=max(spec.mu_base + p_off[p, 0] + rep_off[p, 0, k], 0.05),
                    mu_actuated_mean=max(
                        spec.mu_actuated_mean + p_off[p, 1] + rep_off[p, 1, k], 0.05
                    ),
                )
                params_k = replace(
                    protocol.swipe,
                    seed=_child_seed(seed, p, c_idx, k),
                    start_direction="ltr" if k % 2 == 0 else "rtl",
                )
                rec, log = simulate_swipe_recording(
                    spec_k,
                    params_k,
                    actuation=condition,
                    participant_id=pid,
                    tablet_id=tablet_id,
                    session_index=0,
                    trial_index=k,
                )
                recordings.append((rec, log))
                entries.append(_gt_entry(pid, condition, k, log))
        for k in range(protocol.ridge_trials_per_participant):
            spec_k = replace(
                spec,
                mu_base=spec.mu_base + p_off[p, 0],
                mu_actuated_mean=spec.mu_actuated_mean + p_off[p, 1],
            )
            params_k = replace(
                protocol.swipe,
                seed=_child_seed(seed, p, 2, k),
                start_direction="ltr" if k % 2 == 0 else "rtl",
            )
            rec, log = simulate_swipe_recording(
                spec_k,
                params_k,
                ridge=ridge,
                participant_id=pid,
                tablet_id=tablet_id,
                session_index=1,
                trial_index=k,
            )
            recordings.append((rec, log))
            entries.append(_gt_entry(pid, "ridge", k, log))

    ground_truth = {
        "tablet_id": tablet_id,
        "seed": seed,
        "technology": spec.technology,
        "mu_high_true": spec.mu_high_true,
        "mu_low_true": spec.mu_low_true,
        "delta_mu_true": spec.mu_high_true - spec.mu_low_true,
        "latency_delay_s": spec.latency_delay,
        "ridge_polarity": spec.ridge_polarity,
        "recordings": entries,
    }
    data = PhysicalSessionData(
        tablet_id=tablet_id,
        recordings=recordings,
        ground_truth=ground_truth,
        out_dir=Path(out_dir) if out_dir is not None else None,
    )
    if out_dir is not None:
        _write_session(data)
    return data


def _child_seed(seed: int, *parts: int) -> int:
    s = int(seed)
    for p in parts:
        s = s * 1_000_003 + int(p) + 1
    return s & ((1 << 63) - 1)


def _gt_entry(pid: str, condition: str, trial: int, log: SimEventLog) -> dict:
    return {
        "participant_id": pid,
        "condition": condition,
        "trial_index": trial,
        "path": f"recordings/{pid}/{condition}/rec_{trial:03d}.csv",
        "events": asdict(log),
    }


def _write_session(data: PhysicalSessionData) -> None:
    root = data.out_dir
    root.mkdir(parents=True, exist_ok=True)
    for rec, _ in data.recordings:
        m = rec.meta
        path = root / "recordings" / m.participant_id / m.actuation / f"rec_{m.trial_index:03d}.csv"
        write_recording(rec, path)
    gt_path = root / "ground_truth.json"
    gt_path.write_text(
        json.dumps(data.ground_truth, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


# ---- pointing logs ----


@dataclass(frozen=True)
class PointingGroundTruth:
    intercept_a_ms: float = 200.0
    slope_b_ms_per_bit: float = 250.0
    mt_noise_std_ms: float = 0.0
    miss_prob: float = 0.0
    participant_offset_std_ms: float = 0.0
    min_mt_ms: float = 100.0

    def __post_init__(self):
        if not 0.0 <= self.miss_prob <= 1.0:
            raise InvalidSpec("miss_prob must be a probability")
        if self.mt_noise_std_ms < 0 or self.participant_offset_std_ms < 0:
            raise InvalidSpec("noise levels must be non-negative")


@dataclass(frozen=True)
class PointingProtocol:
    distance_d: float = 80.0
    widths: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0)
    reps: int = 6
    participants: int = 10
    tablet_id: str = "sim"
    haptic: bool = False
    window_length_mm: float = 100.0
    inter_trial_gap_ms: float = 500.0

    def __post_init__(self):
        if self.distance_d <= 0 or any(w <= 0 for w in self.widths):
            raise InvalidSpec("distance and widths must be positive")
        if self.reps < 1 or self.participants < 1:
            raise InvalidSpec("need at least one repetition and participant")


def simulate_pointing_logs(
    ground_truth: PointingGroundTruth,
    protocol: PointingProtocol,
    seed: int,
) -> list[PointingTrial]:
    """Pointing-task trials drawn from the linear movement-time law.

    MT = a + b*ID + participant offset + noise, floored at min_mt_ms; misses
    are Bernoulli draws, with the release placed just outside the target.
    Width order is shuffled per repetition block and the travel direction
    alternates every trial.
    """
    trials = []
    margin = (protocol.window_length_mm - protocol.distance_d) / 2.0
    if margin < 0:
        raise InvalidSpec("distance exceeds the task window")
    for p in range(protocol.participants):
        pid = f"p{p:02d}"
        rng = _rng(seed, 0x9E, p)
        p_offset = rng.normal(0.0, ground_truth.participant_offset_std_ms)
        clock = 0.0
        trial_index = 0
        for _ in range(protocol.reps):
            order = rng.permutation(len(protocol.widths))
            for wi in order:
                w = float(protocol.widths[wi])
                idx = np.log2(protocol.distance_d / w + 1.0)
                mt = (
                    ground_truth.intercept_a_ms
                    + ground_truth.slope_b_ms_per_bit * idx
                    + p_offset
                    + (rng.normal(0.0, ground_truth.mt_noise_std_ms)
                       if ground_truth.mt_noise_std_ms > 0 else 0.0)
                )
                mt = max(mt, ground_truth.min_mt_ms)
                direction = "ltr" if trial_index % 2 == 0 else "rtl"
                target_center = (
                    protocol.window_length_mm - margin if direction == "ltr" else margin
                )
                success = bool(rng.random() >= ground_truth.miss_prob)
                if success:
                    release = target_center + (rng.random() * 2.0 - 1.0) * 0.499 * w
                else:
                    side = 1.0 if rng.random() < 0.5 else -1.0
                    release = target_center + side * (0.5 + 0.05 + 0.5 * rng.random()) * w
                t_touch = clock + protocol.inter_trial_gap_ms
                trials.append(
                    PointingTrial(
                        participant_id=pid,
                        tablet_id=protocol.tablet_id,
                        haptic=protocol.haptic,
                        distance_d=protocol.distance_d,
                        width_w=w,
                        t_touch=t_touch,
                        t_release=t_touch + mt,
                        release_x=release,
                        target_center=target_center,
                        success=success,
                        trial_index=trial_index,
                        direction=direction,
                    )
                )
                clock = t_touch + mt
                trial_index += 1
    return trials


def write_pointing_session(trials: Sequence[PointingTrial], path: Path) -> None:
    write_pointing_log(trials, path)


# ---- construction from plain dicts (CLI spec files) ----


def tablet_spec_from_dict(d: dict) -> SimTabletSpec:
    d = dict(d)
    if d.get("spatial_pattern"):
        d["spatial_pattern"] = SpatialPattern(**d["spatial_pattern"])
    else:
        d["spatial_pattern"] = None
    if "stick_slip" in d and d["stick_slip"] is not None:
        d["stick_slip"] = StickSlipSpec(**d["stick_slip"])
    else:
        d.pop("stick_slip", None)
    return SimTabletSpec(**d)


def physical_protocol_from_dict(d: dict) -> PhysicalProtocol:
    d = dict(d)
    if "ridge_span" in d:
        d["ridge_span"] = tuple(d["ridge_span"])
    if "swipe" in d:
        sw = dict(d["swipe"])
        if "force_window" in sw:
            sw["force_window"] = tuple(sw["force_window"])
        d["swipe"] = SimSwipeParams(**sw)
    return PhysicalProtocol(**d)


def pointing_ground_truth_from_dict(d: dict) -> PointingGroundTruth:
    return PointingGroundTruth(**d)


def pointing_protocol_from_dict(d: dict) -> PointingProtocol:
    d = dict(d)
    if "widths" in d:
        d["widths"] = tuple(float(w) for w in d["widths"])
    return PointingProtocol(**d)
