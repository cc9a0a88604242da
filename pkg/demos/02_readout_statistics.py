"""
Readout statistics: jump histogram and level lifetimes
======================================================

Sweeps the field back and forth, collecting the conductance-jump fields
that reveal the nuclear state, then bins them into four clusters and
fits each level's lifetime from telegraph dwell times.
"""

import numpy as np

from tbqudit import (
    default_config,
    find_avoided_crossings,
    fit_exponential_lifetime,
    jump_histogram,
    simulate_jump_events,
    telegraph_trajectory,
)

config = default_config()
crossings = find_avoided_crossings(config.system,
                                   window_T=config.sweep.window_T)
rng = np.random.default_rng(config.seed)

# Collect a few thousand jump events. Field noise smears each crossing
# into a Gaussian cluster, exactly as a transport measurement would see.
events = simulate_jump_events(crossings, config.sweep, config.decoherence,
                              rng, n_events=6000)
hist = jump_histogram(events, bin_width_T=1e-3)
print("jump-field clusters:")
for cluster in hist.clusters:
    print(f"  mean {cluster.mean_T * 1e3:+8.3f} mT, "
          f"sigma {cluster.sigma_T * 1e3:.2f} mT, "
          f"weight {cluster.weight:.3f}")

# The nuclear state hops between adjacent levels while the molecule just
# sits there; dwell times are exponential with the level's T1.
trace = telegraph_trajectory(config.decoherence, duration_s=60_000.0,
                             rng=rng)
dwells = trace.dwell_times_by_level()
print()
print("lifetime fits from telegraph dwells:")
for level, true_T1 in enumerate(config.decoherence.T1_s):
    fit = fit_exponential_lifetime(np.asarray(dwells[level]))
    print(f"  level {level}: T1 = {fit.T1_s:5.1f} s "
          f"(95% CI {fit.ci_low_s:.1f} to {fit.ci_high_s:.1f}, "
          f"n = {fit.n_dwells}, true {true_T1:.0f})")
