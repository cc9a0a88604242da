"""
The full sequence: initialize, flip, read back
==============================================

Runs the complete single-molecule protocol end to end: sweep until the
nucleus is pinned to |+3/2>, play a pi pulse, then sweep again and
classify the jump field. Repeats it a hundred times, first in the
deterministic limit and then with realistic decoherence.
"""

from tbqudit import (
    default_config,
    idealized_protocol_config,
    resolve_pulse,
    run_configured_sequence,
    run_full_sequence,
)

config = default_config()

# Deterministic limit: certain flips, frozen nucleus, no field noise.
ideal = idealized_protocol_config(config)
segments = resolve_pulse(ideal, "pi01")
report = run_full_sequence(ideal, segments, init_target_m_I=1.5, reps=100,
                           initial_m_I=1.5)
print("idealized limit:")
print(f"  detected {report.n_detected}/100, frequencies "
      f"{report.detection_frequencies()}")
print(f"  every repetition took "
      f"{report.outcomes[0].elapsed_s:.1f} s of simulated time")

# Realistic run: finite flip probability, field noise, telegraph jumps
# during the probe. The pi-pulse outcome still dominates.
real = run_configured_sequence(config)
print()
print("realistic decoherence:")
print(f"  detected {real.n_detected}/{len(real.outcomes)}, degraded flag "
      f"{real.degraded}")
for m, f in sorted(real.detection_frequencies().items(), reverse=True):
    print(f"  m_I = {m:+.1f}: frequency {f:.2f}")
