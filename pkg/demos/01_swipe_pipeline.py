"""From a raw force/position recording to canonical friction swipes.

Simulates one 10-second exploration (6 swipes at ~100 mm/s), computes the
friction coefficient, cuts it into constant-direction segments, removes the
position trend, and gates quality.
"""

import numpy as np

from haptibench import (
    PipelineConfig,
    SimSwipeParams,
    SimTabletSpec,
    compute_friction,
    correct_trend,
    estimate_trend_slope,
    quality_gate,
    segment_swipes,
    simulate_swipe_recording,
    validate_recording,
)

spec = SimTabletSpec(
    technology="electroadhesion",
    mu_base=0.45,
    mu_actuated_mean=0.75,
    noise_std=0.015,
    trend_slope=0.0036,  # sensor-crosstalk trend, removed by the pipeline
)
params = SimSwipeParams(speed=100.0, duration=10.0, n_swipes=6, seed=7)

rec, events = simulate_swipe_recording(spec, params, actuation="constant_max")
print(f"recording: {len(rec)} samples over {rec.duration:.2f} s")

check = validate_recording(rec)
print(f"force outside [0.5, 1.5] N: {check.out_of_window_fraction:.1%}, "
      f"motion duty cycle: {check.motion_duty_cycle:.1%}")

fs = compute_friction(rec)
swipes = segment_swipes(fs)
print(f"\nsegmented {len(swipes)} swipes "
      f"(ground truth has {len(events.leg_windows)} legs)")
for i, s in enumerate(swipes):
    print(f"  swipe {i}: {s.direction}, {len(s)} samples, "
          f"x {s.x[0]:.1f}..{s.x[-1]:.1f} mm, {s.mean_speed:.0f} mm/s")

trend = estimate_trend_slope(swipes)
print(f"\nestimated trend slope: {trend.slope_a:.5f} per mm "
      f"(injected {spec.trend_slope})")
corrected = [correct_trend(s, trend) for s in swipes]

for i, (s, rep) in enumerate(zip(corrected, quality_gate(corrected))):
    verdict = "accepted" if rep.accepted else f"rejected ({rep.reject_reason})"
    print(f"  swipe {i}: mu = {s.mu.mean():.3f} +/- {s.mu.std(ddof=1):.3f}, "
          f"CV {rep.cv:.3f} -> {verdict}")
