"""Full two-device comparison: physical + behavioral metrics, statistics,
and the rendered report.

An electroadhesion tablet (larger friction range, short latency) is compared
against an ultrasonic one (smaller range with a standing-wave ripple, longer
latency); the markdown report is printed at the end.
"""

from haptibench import (
    PhysicalProtocol,
    PointingGroundTruth,
    PointingProtocol,
    RawComparisonSamples,
    SimSwipeParams,
    SimTabletSpec,
    SpatialPattern,
    analyze_physical_recordings,
    build_tablet_profile,
    compare_tablets,
    pointing_metrics,
    render_report,
    simulate_physical_session,
    simulate_pointing_logs,
    split_by_condition,
)

DEVICES = {
    "etab": dict(
        spec=SimTabletSpec(
            technology="electroadhesion", mu_base=0.443, mu_actuated_mean=0.744,
            latency_delay=0.006, noise_std=0.015,
        ),
        pointing=PointingGroundTruth(intercept_a_ms=250, slope_b_ms_per_bit=180,
                                     mt_noise_std_ms=120, miss_prob=0.104),
    ),
    "utab": dict(
        spec=SimTabletSpec(
            technology="ultrasonic", mu_base=0.771, mu_actuated_mean=0.620,
            spatial_pattern=SpatialPattern(amplitude=0.124, wavelength=25.0),
            latency_delay=0.033, noise_std=0.015,
        ),
        pointing=PointingGroundTruth(intercept_a_ms=300, slope_b_ms_per_bit=187,
                                     mt_noise_std_ms=140, miss_prob=0.104),
    ),
}

protocol = PhysicalProtocol(
    participants=6, trials_per_participant=18, ridge_trials_per_participant=2,
    per_rep_mu_std=0.08, swipe=SimSwipeParams(duration=2.0, n_swipes=1),
)


def benchmark(tablet_id, seed):
    dev = DEVICES[tablet_id]
    data = simulate_physical_session(dev["spec"], protocol, seed=seed,
                                     tablet_id=tablet_id)
    analysis = analyze_physical_recordings(r for r, _ in data.recordings)
    trials = []
    for haptic in (False, True):
        proto = PointingProtocol(reps=6, participants=10, tablet_id=tablet_id,
                                 haptic=haptic)
        trials += simulate_pointing_logs(dev["pointing"], proto,
                                         seed=seed + (1 if haptic else 0))
    by_cond = {k.haptic: pointing_metrics(v, k)
               for k, v in split_by_condition(trials).items()}
    return analysis, by_cond, build_tablet_profile(analysis, by_cond)


print("benchmarking etab ...")
an_a, pm_a, prof_a = benchmark("etab", seed=100)
print("benchmarking utab ...")
an_b, pm_b, prof_b = benchmark("utab", seed=200)

raw = RawComparisonSamples(
    delta_mu_a=an_a.frange.per_trial_samples,
    delta_mu_b=an_b.frange.per_trial_samples,
    mt_a_no_haptic=pm_a[False].mt_hardest_samples,
    mt_a_haptic=pm_a[True].mt_hardest_samples,
    mt_b_no_haptic=pm_b[False].mt_hardest_samples,
    mt_b_haptic=pm_b[True].mt_hardest_samples,
)
report = compare_tablets(prof_a, prof_b, raw)
print()
print(render_report(report, "markdown").decode())
