"""Constant-actuation friction metrics for one simulated tablet.

Runs the full physical protocol (6 participants x 18 repetitions per
actuation condition) and prints the friction levels with their variability
descriptors, plus the friction range and its scale-free variants.
"""

from haptibench import (
    PhysicalProtocol,
    SimSwipeParams,
    SimTabletSpec,
    analyze_physical_recordings,
    simulate_physical_session,
)

spec = SimTabletSpec(
    technology="ultrasonic",
    mu_base=0.771,  # high friction without actuation
    mu_actuated_mean=0.620,  # ultrasonic levitation lowers friction
    spatial_pattern=None,
    noise_std=0.02,
)
protocol = PhysicalProtocol(
    participants=6,
    trials_per_participant=18,
    ridge_trials_per_participant=0,
    inter_participant_mu_std=0.10,  # finger-to-finger spread
    per_rep_mu_std=0.03,
    swipe=SimSwipeParams(duration=2.0, n_swipes=1),
)

data = simulate_physical_session(spec, protocol, seed=11, tablet_id="utab")
print(f"simulated {len(data.recordings)} recordings")

analysis = analyze_physical_recordings(r for r, _ in data.recordings)

for label, st in (("highest friction", analysis.mu_high),
                  ("lowest friction", analysis.mu_low)):
    print(f"\n{label} ({'actuated' if (st is analysis.mu_high) == (analysis.high_condition == 'constant_max') else 'unactuated'})")
    print(f"  mean                 {st.mean_mu:.3f}")
    print(f"  inter-participant SD {st.inter_participant_std_sigma:.3f}")
    print(f"  intra-trial SD       {st.intra_trial_std_delta:.3f}")
    print(f"  n = {st.n_swipes} swipes / {st.n_participants} participants")

fr = analysis.frange
print(f"\nfriction range      {fr.delta_mu:.3f} "
      f"(inter-participant SD {fr.inter_participant_std:.3f}, n={fr.n_pairs})")
print(f"relative range      {fr.relative_range:.3f}")
print(f"friction contrast   {fr.friction_contrast:.3f}")
print(f"\nground truth: levels {data.ground_truth['mu_high_true']:.3f} / "
      f"{data.ground_truth['mu_low_true']:.3f}, "
      f"range {data.ground_truth['delta_mu_true']:.3f}")
