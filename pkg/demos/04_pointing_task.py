"""Behavioral metrics from a simulated pointing session.

Trials follow the linear movement-time law MT = a + b * ID with noise; the
analysis recovers the difficulty slope per participant, the movement time at
the hardest difficulty, and the error rate.
"""

from haptibench import (
    ConditionKey,
    PointingGroundTruth,
    PointingProtocol,
    aggregate_movement_times,
    fitts_fit,
    index_of_difficulty,
    pointing_metrics,
    simulate_pointing_logs,
)

ground_truth = PointingGroundTruth(
    intercept_a_ms=200.0,
    slope_b_ms_per_bit=250.0,
    mt_noise_std_ms=120.0,
    miss_prob=0.10,
)
protocol = PointingProtocol(
    distance_d=80.0,
    widths=(1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0),
    reps=6,
    participants=10,
    tablet_id="etab",
)

print("difficulty indexes for D = 80 mm:")
for w in protocol.widths:
    print(f"  W = {w:.0f} mm -> ID = {index_of_difficulty(80, w):.2f} bits")

trials = simulate_pointing_logs(ground_truth, protocol, seed=21)
key = ConditionKey("etab", False)
print(f"\n{len(trials)} trials "
      f"({len(protocol.widths)} widths x {protocol.reps} reps x {protocol.participants} participants)")

one = aggregate_movement_times(trials, key)["p00"]
fit = fitts_fit(sorted(one.items()))
print(f"\nparticipant p00: MT = {fit.intercept_a:.0f} + {fit.slope_b:.0f} * ID "
      f"(R2 = {fit.r_squared:.3f})")

pm = pointing_metrics(trials, key)
print(f"\ncondition summary")
print(f"  slope b        {pm.slope_mean:.0f} +/- {pm.slope_std:.0f} ms/bit "
      f"(n={pm.n_participants}, truth {ground_truth.slope_b_ms_per_bit:.0f})")
print(f"  MT @ ID {pm.hardest_id:.1f}   {pm.mt_hardest_mean:.0f} +/- {pm.mt_hardest_std:.0f} ms "
      f"(n={len(pm.mt_hardest_samples)})")
print(f"  error rate     {pm.error_rate:.1%} (truth {ground_truth.miss_prob:.1%})")
