"""Stochastic readout: hysteresis sweeps, telegraph relaxation, estimators.

The electronic moment is modeled as a classical two-state variable (up or
down along the easy axis) that can reverse only at the avoided crossing
matching the current nuclear state, and only when the sweep carries the
system through that crossing in the direction where reversal lowers the
Zeeman energy: an up-moment reverses on an up-sweep, a down-moment on a
down-sweep.  Each eligible passage reverses with the Landau-Zener
probability of the crossing gap at the configured sweep rate.  A recorded
reversal field is the true crossing field plus Gaussian noise.

Between and during sweeps the nuclear state undergoes telegraph dynamics: a
continuous-time chain over the four levels with exponential dwell times
1/T1 per level and jumps only to adjacent levels (split evenly at interior
levels).  The estimators in this module (exponential lifetime fit with an
exact chi-squared confidence interval, four-component jump-field histogram
fit) are the analysis half of the readout loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .constants import QUDIT_DIM, QUDIT_M_I
from .hamiltonian import CrossingInfo
from .landau_zener import flip_probability
from .pulses import DecoherenceParams


@dataclass(frozen=True)
class SweepConfig:
    """Field sweep parameters for readout traversals.

    Attributes:
        window_T: (start, stop) of the up-sweep; the down-sweep reverses it.
        rate_T_per_s: Magnitude of dB/dt, > 0.
        field_noise_sigma_T: Gaussian noise added to recorded jump fields.
    """

    window_T: tuple[float, float] = (-0.06, 0.06)
    rate_T_per_s: float = 0.1
    field_noise_sigma_T: float = 3e-3

    def __post_init__(self) -> None:
        lo, hi = self.window_T
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValueError(f"window_T must be an increasing pair, got {self.window_T}")
        if not (self.rate_T_per_s > 0 and np.isfinite(self.rate_T_per_s)):
            raise ValueError(f"rate_T_per_s must be positive, got {self.rate_T_per_s}")
        if self.field_noise_sigma_T < 0:
            raise ValueError(
                f"field_noise_sigma_T must be >= 0, got {self.field_noise_sigma_T}")

    @property
    def traversal_time_s(self) -> float:
        lo, hi = self.window_T
        return (hi - lo) / self.rate_T_per_s


@dataclass(frozen=True)
class JumpEvent:
    """One recorded electronic reversal."""

    field_T: float
    sweep_index: int
    direction: str
    m_I: float


@dataclass
class MoleculeState:
    """Classical readout-side state: electronic orientation and m_I."""

    electronic_up: bool
    m_I: float


def _crossing_for(crossings: list[CrossingInfo] | tuple[CrossingInfo, ...],
                  m_I: float,
                  window_T: tuple[float, float]) -> CrossingInfo | None:
    """Crossing the sweep would pass while the given nuclear state is set.

    Every nuclear state has exactly one crossing field; it is eligible only
    if it lies inside the sweep window.
    """
    best = None
    for c in crossings:
        if abs(c.m_I - m_I) < 1e-9 and window_T[0] <= c.field_T <= window_T[1]:
            if best is None or abs(c.field_T) < abs(best.field_T):
                best = c
    return best


def sweep_once(state: MoleculeState, direction: str,
               crossings: list[CrossingInfo] | tuple[CrossingInfo, ...],
               config: SweepConfig,
               rng: np.random.Generator,
               sweep_index: int = 0) -> JumpEvent | None:
    """Run one full traversal; possibly reverse the electronic moment.

    Only one orientation can reverse per direction (reversal must lower the
    electronic Zeeman energy): up-moments on up-sweeps, down-moments on
    down-sweeps.  The nuclear state is treated as frozen within a traversal,
    which is short against the nuclear lifetimes; callers advance telegraph
    dynamics between traversals.

    Args:
        state: Mutated in place when a reversal occurs.
        direction: "up" or "down".
        crossings: Catalog from :func:`~tbqudit.hamiltonian.find_avoided_crossings`.
        config: Sweep window, rate, and recording noise.
        rng: Source for the reversal draw and field noise.
        sweep_index: Stamped on the returned event.

    Returns:
        The jump event, or None when no reversal happened.
    """
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    eligible = state.electronic_up if direction == "up" else not state.electronic_up
    if not eligible:
        return None
    crossing = _crossing_for(crossings, state.m_I, config.window_T)
    if crossing is None:
        return None
    p = flip_probability(crossing.gap_Hz, crossing.slope_diff_Hz_per_T,
                         config.rate_T_per_s)
    if rng.random() >= p:
        return None
    state.electronic_up = not state.electronic_up
    noisy_field = crossing.field_T + rng.normal(0.0, config.field_noise_sigma_T)
    return JumpEvent(field_T=noisy_field, sweep_index=sweep_index,
                     direction=direction, m_I=state.m_I)


def advance_telegraph(m_I: float, dec: DecoherenceParams, duration_s: float,
                      rng: np.random.Generator) -> float:
    """Propagate the nuclear telegraph chain for a time interval."""
    matches = [i for i, m in enumerate(QUDIT_M_I) if abs(m - m_I) < 1e-9]
    if not matches:
        raise ValueError(f"m_I must be one of {QUDIT_M_I}, got {m_I}")
    level = matches[0]
    remaining = duration_s
    while True:
        dwell = rng.exponential(dec.T1_s[level])
        if dwell >= remaining:
            return QUDIT_M_I[level]
        remaining -= dwell
        level = _telegraph_jump(level, rng)


def _telegraph_jump(level: int, rng: np.random.Generator) -> int:
    neighbors = [j for j in (level - 1, level + 1) if 0 <= j < QUDIT_DIM]
    if len(neighbors) == 1:
        return neighbors[0]
    return neighbors[rng.integers(len(neighbors))]


@dataclass(frozen=True)
class TelegraphTrace:
    """Piecewise-constant nuclear trajectory.

    ``times_s[i]`` is the time of the i-th jump and ``levels[i]`` the level
    occupied after it; ``levels`` starts with the initial level at time 0.
    """

    times_s: np.ndarray
    levels: np.ndarray
    duration_s: float

    def dwell_times_by_level(self) -> dict[int, np.ndarray]:
        """Complete dwell durations per level (censored ends excluded)."""
        out: dict[int, list[float]] = {i: [] for i in range(QUDIT_DIM)}
        bounds = np.concatenate([[0.0], self.times_s, [self.duration_s]])
        for k in range(len(self.levels)):
            start, stop = bounds[k], bounds[k + 1]
            censored = k == 0 or k == len(self.levels) - 1
            if not censored:
                out[int(self.levels[k])].append(stop - start)
        return {i: np.asarray(v) for i, v in out.items()}


def telegraph_trajectory(dec: DecoherenceParams, duration_s: float,
                         rng: np.random.Generator,
                         initial_level: int = 0) -> TelegraphTrace:
    """Simulate the nuclear telegraph chain for a fixed duration."""
    if initial_level not in range(QUDIT_DIM):
        raise ValueError(f"initial_level must be 0..3, got {initial_level}")
    if duration_s <= 0:
        raise ValueError(f"duration_s must be positive, got {duration_s}")
    t = 0.0
    level = initial_level
    times: list[float] = []
    levels: list[int] = [level]
    while True:
        t += rng.exponential(dec.T1_s[level])
        if t >= duration_s:
            break
        level = _telegraph_jump(level, rng)
        times.append(t)
        levels.append(level)
    return TelegraphTrace(times_s=np.asarray(times),
                          levels=np.asarray(levels, dtype=int),
                          duration_s=duration_s)


@dataclass(frozen=True)
class InitializationResult:
    """Outcome of sweeping until the target nuclear state is read out."""

    success: bool
    sweeps_used: int
    elapsed_s: float
    final_state: MoleculeState
    events: tuple[JumpEvent, ...]


def initialize_state(target_m_I: float,
                     crossings: list[CrossingInfo] | tuple[CrossingInfo, ...],
                     config: SweepConfig, dec: DecoherenceParams,
                     rng: np.random.Generator,
                     max_sweeps: int = 10_000,
                     initial: MoleculeState | None = None) -> InitializationResult:
    """Sweep back and forth until a jump is recorded in the target state.

    Each traversal may reverse the electronic moment at the crossing of the
    current nuclear state; the nuclear state itself drifts by telegraph
    dynamics between traversals.  Initialization succeeds at the first jump
    whose nuclear state equals the target; measurement is the projective
    record of that jump.

    Returns:
        :class:`InitializationResult`; ``success`` is False if ``max_sweeps``
        traversals pass without a target-state jump.
    """
    if not any(abs(m - target_m_I) < 1e-9 for m in QUDIT_M_I):
        raise ValueError(f"target_m_I must be one of {QUDIT_M_I}, got {target_m_I}")
    state = initial if initial is not None else MoleculeState(
        electronic_up=True, m_I=QUDIT_M_I[int(rng.integers(QUDIT_DIM))])
    events: list[JumpEvent] = []
    elapsed = 0.0
    for sweep_index in range(max_sweeps):
        direction = "up" if sweep_index % 2 == 0 else "down"
        event = sweep_once(state, direction, crossings, config, rng,
                           sweep_index=sweep_index)
        elapsed += config.traversal_time_s
        if event is not None:
            events.append(event)
            if abs(event.m_I - target_m_I) < 1e-9:
                return InitializationResult(
                    success=True, sweeps_used=sweep_index + 1,
                    elapsed_s=elapsed, final_state=state,
                    events=tuple(events))
        state.m_I = advance_telegraph(state.m_I, dec,
                                      config.traversal_time_s, rng)
    return InitializationResult(success=False, sweeps_used=max_sweeps,
                                elapsed_s=elapsed, final_state=state,
                                events=tuple(events))


def simulate_jump_events(crossings: list[CrossingInfo] | tuple[CrossingInfo, ...],
                         config: SweepConfig, dec: DecoherenceParams,
                         rng: np.random.Generator,
                         n_events: int,
                         max_sweeps: int | None = None) -> list[JumpEvent]:
    """Collect jump events from continuous back-and-forth sweeping."""
    if n_events <= 0:
        raise ValueError(f"n_events must be positive, got {n_events}")
    if max_sweeps is None:
        max_sweeps = 100 * n_events
    state = MoleculeState(electronic_up=True,
                          m_I=QUDIT_M_I[int(rng.integers(QUDIT_DIM))])
    events: list[JumpEvent] = []
    for sweep_index in range(max_sweeps):
        direction = "up" if sweep_index % 2 == 0 else "down"
        event = sweep_once(state, direction, crossings, config, rng,
                           sweep_index=sweep_index)
        if event is not None:
            events.append(event)
            if len(events) >= n_events:
                return events
        state.m_I = advance_telegraph(state.m_I, dec,
                                      config.traversal_time_s, rng)
    return events


@dataclass(frozen=True)
class LifetimeFit:
    """Exponential lifetime estimate with an exact confidence interval."""

    T1_s: float
    ci_low_s: float
    ci_high_s: float
    n_dwells: int

    @property
    def ci_half_width_fraction(self) -> float:
        return 0.5 * (self.ci_high_s - self.ci_low_s) / self.T1_s


def fit_exponential_lifetime(dwells_s: np.ndarray,
                             confidence: float = 0.95) -> LifetimeFit:
    """Maximum-likelihood exponential fit of dwell times.

    The estimator is the sample mean; the confidence interval is the exact
    one from ``2 n T / T1 ~ chi-squared(2n)``.
    """
    dwells = np.asarray(dwells_s, dtype=float)
    if dwells.size == 0:
        raise ValueError("no dwell times to fit")
    if np.any(dwells <= 0) or not np.all(np.isfinite(dwells)):
        raise ValueError("dwell times must be positive and finite")
    n = dwells.size
    total = float(dwells.sum())
    alpha = 1.0 - confidence
    hi_q = stats.chi2.ppf(alpha / 2, 2 * n)
    lo_q = stats.chi2.ppf(1 - alpha / 2, 2 * n)
    return LifetimeFit(T1_s=total / n,
                       ci_low_s=2 * total / lo_q,
                       ci_high_s=2 * total / hi_q,
                       n_dwells=n)


@dataclass(frozen=True)
class GaussianCluster:
    """One histogram component."""

    mean_T: float
    sigma_T: float
    weight: float
    n_events: int


@dataclass(frozen=True)
class JumpHistogram:
    """Binned jump fields plus a four-component Gaussian decomposition."""

    bin_edges_T: np.ndarray
    counts: np.ndarray
    clusters: tuple[GaussianCluster, ...]


def _kmeans_1d(values: np.ndarray, k: int, iterations: int = 200) -> np.ndarray:
    """Deterministic 1-D k-means; centers seeded at evenly spaced quantiles."""
    quantiles = (np.arange(k) + 0.5) / k
    centers = np.quantile(values, quantiles)
    for _ in range(iterations):
        assign = np.argmin(np.abs(values[:, None] - centers[None, :]), axis=1)
        new_centers = centers.copy()
        for j in range(k):
            sel = values[assign == j]
            if sel.size:
                new_centers[j] = sel.mean()
        if np.allclose(new_centers, centers, rtol=0, atol=1e-15):
            break
        centers = new_centers
    return np.sort(centers)


def jump_histogram(events: list[JumpEvent] | tuple[JumpEvent, ...],
                   bin_width_T: float = 1e-3,
                   n_components: int = QUDIT_DIM) -> JumpHistogram:
    """Histogram of jump fields with per-cluster Gaussian fits.

    Events are partitioned by a deterministic one-dimensional k-means into
    ``n_components`` clusters; each cluster gets a Gaussian fit by sample
    mean and standard deviation.  With well-separated crossings this
    resolves the four nuclear states from jump fields alone.
    """
    if not events:
        raise ValueError("no events to histogram")
    if bin_width_T <= 0:
        raise ValueError(f"bin_width_T must be positive, got {bin_width_T}")
    fields = np.asarray([e.field_T for e in events], dtype=float)
    lo = np.floor(fields.min() / bin_width_T) * bin_width_T
    hi = np.ceil(fields.max() / bin_width_T) * bin_width_T
    n_bins = max(int(round((hi - lo) / bin_width_T)), 1)
    counts, edges = np.histogram(fields, bins=n_bins, range=(lo, hi))
    centers = _kmeans_1d(fields, n_components)
    assign = np.argmin(np.abs(fields[:, None] - centers[None, :]), axis=1)
    clusters = []
    for j in range(n_components):
        sel = fields[assign == j]
        if sel.size == 0:
            clusters.append(GaussianCluster(mean_T=float(centers[j]),
                                            sigma_T=0.0, weight=0.0,
                                            n_events=0))
            continue
        clusters.append(GaussianCluster(
            mean_T=float(sel.mean()),
            sigma_T=float(sel.std(ddof=1)) if sel.size > 1 else 0.0,
            weight=sel.size / fields.size,
            n_events=int(sel.size)))
    return JumpHistogram(bin_edges_T=edges, counts=counts,
                         clusters=tuple(clusters))


def readout_fidelity(T1_s: float, sequence_time_s: float) -> float:
    """Probability the nuclear state survives one detection sequence.

    The state is lost if it relaxes before the readout sweep records it;
    for exponential relaxation over the sequence time this is
    ``exp(-t_seq / T1)``.
    """
    if T1_s <= 0:
        raise ValueError(f"T1_s must be positive, got {T1_s}")
    if sequence_time_s < 0:
        raise ValueError(f"sequence_time_s must be >= 0, got {sequence_time_s}")
    return float(np.exp(-sequence_time_s / T1_s))
