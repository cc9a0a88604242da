"""Four-level qudit evolution: rotating-frame, lab-frame, and open-system.

The rotating-frame (RWA) Hamiltonian lives in a multi-rotating frame with
one frame frequency per adjacent pair: the targeting tone's frequency where
a tone exists, the bare transition frequency otherwise.  Relative to the
lowest level, level ``m`` then carries the accumulated detuning
``-sum_{k<m} (f_k - nu_k)`` on the diagonal and the targeting tone
contributes ``(Omega/2) e^{i phi}`` on the ``(m, m+1)`` element.  Segment
propagators compose in local segment time, which is exact whenever
consecutive segments share a frame (all sequences built here do).

The lab-frame path integrates the explicitly time-dependent cosine drives
with a fixed-step fourth-order commutator-free Magnus scheme (two matrix
exponentials per step, exactly unitary), step at most ``1/(200 nu_max)``,
halving until the final populations are stable; it is the independent
oracle for the RWA construction, agreeing on populations to better than
1e-3 whenever every Rabi amplitude is at most ``nu_min / 50``.

Open-system evolution applies the master equation with adjacent-level
population exchange at rates ``1/T1`` (uniform branching at interior
levels) and pure dephasing built from cumulative projectors so each
adjacent coherence decays at exactly ``1/T2star`` of its transition.  Each
constant-RWA segment is propagated exactly through the matrix exponential
of its 16x16 Liouvillian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .constants import QUDIT_DIM
from .pulses import DecoherenceParams, PulseSegment, PulseTone, resonant_tone, half_pi_pulse
from .landau_zener import _ordered_product

# Commutator-free 4th-order coefficients (two Gauss nodes).
_CF4_A1 = 0.25 - np.sqrt(3.0) / 6.0
_CF4_A2 = 0.25 + np.sqrt(3.0) / 6.0
_GAUSS_C1 = 0.5 - np.sqrt(3.0) / 6.0
_GAUSS_C2 = 0.5 + np.sqrt(3.0) / 6.0


class StepSizeUnderflowError(RuntimeError):
    """Raised when lab-frame step halving fails to converge."""


@dataclass
class QuditState:
    """Pure or mixed state of the four-level qudit.

    Exactly one of ``amplitudes`` (length-4 complex, unit norm) or ``rho``
    (4x4 density matrix) is set.
    """

    amplitudes: np.ndarray | None = None
    rho: np.ndarray | None = None

    def __post_init__(self) -> None:
        if (self.amplitudes is None) == (self.rho is None):
            raise ValueError("set exactly one of amplitudes or rho")
        if self.amplitudes is not None:
            amp = np.asarray(self.amplitudes, dtype=complex)
            if amp.shape != (QUDIT_DIM,):
                raise ValueError(f"amplitudes must have shape (4,), got {amp.shape}")
            norm = np.linalg.norm(amp)
            if abs(norm - 1.0) > 1e-9:
                raise ValueError(f"amplitudes must be normalized, |psi| = {norm}")
            self.amplitudes = amp
        else:
            rho = np.asarray(self.rho, dtype=complex)
            if rho.shape != (QUDIT_DIM, QUDIT_DIM):
                raise ValueError(f"rho must have shape (4, 4), got {rho.shape}")
            if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
                raise ValueError("rho must be Hermitian")
            if abs(np.trace(rho).real - 1.0) > 1e-9:
                raise ValueError(f"rho must have unit trace, tr = {np.trace(rho)}")
            self.rho = rho

    @classmethod
    def pure(cls, level: int) -> "QuditState":
        amp = np.zeros(QUDIT_DIM, dtype=complex)
        amp[level] = 1.0
        return cls(amplitudes=amp)

    @property
    def is_pure(self) -> bool:
        return self.amplitudes is not None

    def populations(self) -> np.ndarray:
        if self.amplitudes is not None:
            return np.abs(self.amplitudes) ** 2
        return np.real(np.diag(self.rho))

    def as_density(self) -> np.ndarray:
        if self.rho is not None:
            return self.rho.copy()
        return np.outer(self.amplitudes, self.amplitudes.conj())


def drive_hamiltonian_rwa(levels_GHz: np.ndarray,
                          tones: tuple[PulseTone, ...] | list[PulseTone]) -> np.ndarray:
    """4x4 rotating-frame Hamiltonian in GHz for a set of tones.

    Args:
        levels_GHz: Four qudit level energies (ascending for the standard
            branch convention).
        tones: At most one tone per adjacent pair.

    Returns:
        Complex Hermitian 4x4 matrix; with no tones, the zero matrix (every
        frame frequency equals its transition frequency).

    Raises:
        ValueError: On wrong level count or duplicated pair targets.
    """
    levels = np.asarray(levels_GHz, dtype=float)
    if levels.shape != (QUDIT_DIM,):
        raise ValueError(f"need {QUDIT_DIM} level energies, got shape {levels.shape}")
    by_pair: dict[int, PulseTone] = {}
    for tone in tones:
        if tone.pair in by_pair:
            raise ValueError(f"two tones target pair {tone.pair}; superpose "
                             "amplitudes upstream instead")
        by_pair[tone.pair] = tone
    h = np.zeros((QUDIT_DIM, QUDIT_DIM), dtype=complex)
    cumulative = 0.0
    for pair in range(QUDIT_DIM - 1):
        transition = levels[pair + 1] - levels[pair]
        tone = by_pair.get(pair)
        if tone is not None:
            cumulative -= tone.freq_GHz - transition
            half_rabi_GHz = 0.5 * tone.rabi_MHz * 1e-3
            h[pair, pair + 1] = half_rabi_GHz * np.exp(1j * tone.phase_rad)
            h[pair + 1, pair] = np.conj(h[pair, pair + 1])
        h[pair + 1, pair + 1] = cumulative
    return h


def _expm_hermitian(h_GHz: np.ndarray, duration_s: float) -> np.ndarray:
    """exp(-2 pi i H t) for Hermitian H in GHz, t in seconds."""
    evals, evecs = np.linalg.eigh(h_GHz)
    phases = np.exp(-2j * np.pi * evals * duration_s * 1e9)
    return (evecs * phases) @ evecs.conj().T


def _expm_hermitian_batch(h_stack: np.ndarray, dt_ns: float) -> np.ndarray:
    """Batched exp(-2 pi i H dt) for stacked Hermitian matrices (GHz, ns)."""
    evals, evecs = np.linalg.eigh(h_stack)
    phases = np.exp(-2j * np.pi * evals * dt_ns)
    return np.einsum("nij,nj,nkj->nik", evecs, phases, evecs.conj())


def segment_propagator_rwa(levels_GHz: np.ndarray, segment: PulseSegment) -> np.ndarray:
    """Unitary propagator of one segment in its rotating frame."""
    h = drive_hamiltonian_rwa(levels_GHz, segment.tones)
    return _expm_hermitian(h, segment.duration_s)


def evolve_unitary(state: QuditState, levels_GHz: np.ndarray,
                   segments: list[PulseSegment] | tuple[PulseSegment, ...],
                   method: str = "rwa") -> QuditState:
    """Closed-system evolution through a pulse sequence.

    Args:
        state: Initial pure state.
        levels_GHz: Qudit level energies.
        segments: Ordered pulse segments.
        method: "rwa" (rotating frame, default) or "labframe" (explicit
            cosine drives, the validation oracle).  Populations agree
            between the two in the RWA-valid regime; relative phases are
            frame dependent.

    Returns:
        Final pure state.

    Raises:
        ValueError: If the state is not pure or the method is unknown.
        StepSizeUnderflowError: If lab-frame step halving cannot converge.
    """
    if not state.is_pure:
        raise ValueError("evolve_unitary requires a pure state; use evolve_open")
    psi = state.amplitudes.copy()
    if method == "rwa":
        for seg in segments:
            psi = segment_propagator_rwa(levels_GHz, seg) @ psi
        return QuditState(amplitudes=psi)
    if method == "labframe":
        for index, seg in enumerate(segments):
            psi = _labframe_segment(psi, levels_GHz, seg, index)
        return QuditState(amplitudes=psi)
    raise ValueError(f"unknown method {method!r}; use 'rwa' or 'labframe'")


def _lab_hamiltonian_stack(levels: np.ndarray, seg: PulseSegment,
                           times_ns: np.ndarray) -> np.ndarray:
    """Stacked lab-frame H(t) (GHz) at the given times (ns)."""
    n = times_ns.size
    h = np.zeros((n, QUDIT_DIM, QUDIT_DIM), dtype=complex)
    h[:, np.arange(QUDIT_DIM), np.arange(QUDIT_DIM)] = levels - levels.min()
    for tone in seg.tones:
        drive = tone.rabi_MHz * 1e-3 * np.cos(
            2 * np.pi * tone.freq_GHz * times_ns + tone.phase_rad)
        h[:, tone.pair, tone.pair + 1] += drive
        h[:, tone.pair + 1, tone.pair] += drive
    return h


def _labframe_segment(psi: np.ndarray, levels_GHz: np.ndarray,
                      seg: PulseSegment, seg_index: int) -> np.ndarray:
    levels = np.asarray(levels_GHz, dtype=float)
    if seg.duration_s == 0.0:
        return psi
    freqs = [abs(f) for f in np.diff(levels)] + [t.freq_GHz for t in seg.tones]
    nu_max_GHz = max(freqs)
    duration_ns = seg.duration_s * 1e9
    steps = max(int(np.ceil(200.0 * nu_max_GHz * duration_ns)), 8)
    prev_pops = None
    for halving in range(11):
        if steps > 5e7:
            raise StepSizeUnderflowError(
                f"lab-frame step halving exhausted in segment {seg_index} "
                f"(t = {seg.duration_s:g} s, {steps} steps)")
        final = _cf4_integrate(psi, levels, seg, duration_ns, steps)
        pops = np.abs(final) ** 2
        if prev_pops is not None and np.max(np.abs(pops - prev_pops)) < 1e-6:
            return final
        prev_pops = pops
        steps *= 2
    raise StepSizeUnderflowError(
        f"lab-frame populations did not converge in segment {seg_index} "
        f"(t = {seg.duration_s:g} s)")


def _cf4_integrate(psi: np.ndarray, levels: np.ndarray, seg: PulseSegment,
                   duration_ns: float, steps: int) -> np.ndarray:
    dt = duration_ns / steps
    starts = np.arange(steps) * dt
    h1 = _lab_hamiltonian_stack(levels, seg, starts + _GAUSS_C1 * dt)
    h2 = _lab_hamiltonian_stack(levels, seg, starts + _GAUSS_C2 * dt)
    first = _expm_hermitian_batch(_CF4_A2 * h1 + _CF4_A1 * h2, dt)
    second = _expm_hermitian_batch(_CF4_A1 * h1 + _CF4_A2 * h2, dt)
    # Per step the 'second' exponential acts after 'first'.
    u = _ordered_product(np.matmul(second, first))
    return u @ psi


def _dissipators(dec: DecoherenceParams) -> list[np.ndarray]:
    """Lindblad operators (units 1/sqrt(s)) for T1 exchange and dephasing."""
    ops: list[np.ndarray] = []
    for i in range(QUDIT_DIM):
        neighbors = [j for j in (i - 1, i + 1) if 0 <= j < QUDIT_DIM]
        rate_each = 1.0 / (dec.T1_s[i] * len(neighbors))
        for j in neighbors:
            op = np.zeros((QUDIT_DIM, QUDIT_DIM))
            op[j, i] = np.sqrt(rate_each)
            ops.append(op)
    for k in range(QUDIT_DIM - 1):
        proj = np.zeros((QUDIT_DIM, QUDIT_DIM))
        proj[k + 1:, k + 1:] = np.eye(QUDIT_DIM - k - 1)
        ops.append(np.sqrt(2.0 / dec.T2star_s[k]) * proj)
    return ops


def _liouvillian(h_GHz: np.ndarray, dec: DecoherenceParams | None) -> np.ndarray:
    """Generator on row-major vectorized rho, in 1/s."""
    eye = np.eye(QUDIT_DIM)
    h_rad = 2 * np.pi * 1e9 * h_GHz
    lv = -1j * (np.kron(h_rad, eye) - np.kron(eye, h_rad.T))
    if dec is not None:
        for op in _dissipators(dec):
            opc = op.conj()
            anti = op.conj().T @ op
            lv += (np.kron(op, opc)
                   - 0.5 * np.kron(anti, eye) - 0.5 * np.kron(eye, anti.T))
    return lv


def evolve_open(state: QuditState, levels_GHz: np.ndarray,
                segments: list[PulseSegment] | tuple[PulseSegment, ...],
                dec: DecoherenceParams | None) -> QuditState:
    """Master-equation evolution through a pulse sequence.

    Each segment's constant rotating-frame Hamiltonian and the dissipators
    are combined into a Liouvillian whose exact matrix exponential advances
    the density matrix, so there are no integrator tolerances.  With
    ``dec=None`` this reproduces :func:`evolve_unitary` on the same inputs.

    Returns:
        Final mixed state (density-matrix representation).
    """
    rho = state.as_density()
    for seg in segments:
        if seg.duration_s == 0.0:
            continue
        h = drive_hamiltonian_rwa(levels_GHz, seg.tones)
        lv = _liouvillian(h, dec)
        prop = expm(lv * seg.duration_s)
        rho = (prop @ rho.reshape(-1)).reshape(QUDIT_DIM, QUDIT_DIM)
    rho = 0.5 * (rho + rho.conj().T)
    return QuditState(rho=rho)


def _sample_populations(probs: np.ndarray, shots: int | None,
                        rng: np.random.Generator | None) -> np.ndarray:
    if shots is None:
        return probs
    if rng is None:
        raise ValueError("shots requested without an rng")
    return rng.binomial(shots, np.clip(probs, 0.0, 1.0)) / shots


def rabi_experiment(levels_GHz: np.ndarray, pair: int, rabi_MHz: float,
                    durations_s: np.ndarray,
                    dec: DecoherenceParams | None = None,
                    detuning_Hz: float = 0.0,
                    shots: int | None = None,
                    rng: np.random.Generator | None = None) -> dict[str, np.ndarray]:
    """Drive one pair for a range of durations and record the transfer.

    Starts from the lower level of the pair; the returned ``population``
    column is the upper-level population after each duration (closed,
    resonant case: ``sin^2(pi * Omega * tau)``).  With ``shots`` set, each
    probability is replaced by a binomial frequency estimate.
    """
    durations = np.asarray(durations_s, dtype=float)
    probs = np.empty(durations.size)
    tone = resonant_tone(levels_GHz, pair, rabi_MHz, detuning_Hz=detuning_Hz)
    for i, tau in enumerate(durations):
        seg = PulseSegment(tones=(tone,), duration_s=float(tau))
        if dec is None:
            final = evolve_unitary(QuditState.pure(pair), levels_GHz, [seg])
        else:
            final = evolve_open(QuditState.pure(pair), levels_GHz, [seg], dec)
        probs[i] = final.populations()[pair + 1]
    return {"time_s": durations,
            "population": _sample_populations(probs, shots, rng)}


def ramsey_experiment(levels_GHz: np.ndarray, pair: int, detuning_Hz: float,
                      delays_s: np.ndarray,
                      dec: DecoherenceParams | None = None,
                      rabi_MHz: float = 5.0,
                      shots: int | None = None,
                      rng: np.random.Generator | None = None) -> dict[str, np.ndarray]:
    """Two half-pi pulses separated by a free delay, versus delay.

    The drive is detuned by ``detuning_Hz`` from the pair's transition; the
    delay segment carries a zero-amplitude tone at the drive frequency so
    the detuning phase keeps winding between the pulses.  The upper-level
    population follows ``(1 + cos(2 pi delta tau) e^(-tau/T2star)) / 2`` up
    to finite-pulse corrections of order ``delta / Omega``.
    """
    delays = np.asarray(delays_s, dtype=float)
    pulse = half_pi_pulse(levels_GHz, pair, rabi_MHz, detuning_Hz=detuning_Hz)
    frame_tone = PulseTone(pair=pair, freq_GHz=pulse.tones[0].freq_GHz,
                           rabi_MHz=0.0)
    probs = np.empty(delays.size)
    for i, tau in enumerate(delays):
        wait = PulseSegment(tones=(frame_tone,), duration_s=float(tau))
        seq = [pulse, wait, pulse]
        if dec is None:
            final = evolve_unitary(QuditState.pure(pair), levels_GHz, seq)
        else:
            final = evolve_open(QuditState.pure(pair), levels_GHz, seq, dec)
        probs[i] = final.populations()[pair + 1]
    return {"time_s": delays,
            "population": _sample_populations(probs, shots, rng)}
