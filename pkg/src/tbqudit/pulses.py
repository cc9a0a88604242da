"""Drive tone, pulse segment, and decoherence parameter types.

A tone targets one adjacent level pair of the four-level ladder (pair k
couples levels k and k+1) with an on-resonance Rabi frequency given as a
cyclic frequency, ``rabi_MHz = Omega / 2pi``.  A segment plays a set of
simultaneous tones (at most one per pair) for a fixed duration; a pulse
sequence is an ordered list of segments.  A tone with zero amplitude is
legal and useful: it pins the rotating frame of its pair during a delay so
detuning phase keeps accumulating between pulses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import QUDIT_DIM

N_PAIRS = QUDIT_DIM - 1


@dataclass(frozen=True)
class PulseTone:
    """One drive tone.

    Attributes:
        pair: Index of the targeted adjacent transition (0, 1 or 2).
        freq_GHz: Drive frequency, > 0.
        rabi_MHz: On-resonance Rabi frequency Omega/2pi in MHz, >= 0.
        phase_rad: Drive phase.
    """

    pair: int
    freq_GHz: float
    rabi_MHz: float
    phase_rad: float = 0.0

    def __post_init__(self) -> None:
        if self.pair not in range(N_PAIRS):
            raise ValueError(f"pair must be in 0..{N_PAIRS - 1}, got {self.pair}")
        if not np.isfinite(self.freq_GHz) or self.freq_GHz <= 0:
            raise ValueError(f"freq_GHz must be positive, got {self.freq_GHz}")
        if not np.isfinite(self.rabi_MHz) or self.rabi_MHz < 0:
            raise ValueError(f"rabi_MHz must be >= 0, got {self.rabi_MHz}")
        if not np.isfinite(self.phase_rad):
            raise ValueError(f"phase_rad must be finite, got {self.phase_rad}")


@dataclass(frozen=True)
class PulseSegment:
    """Simultaneous tones played for ``duration_s`` seconds."""

    tones: tuple[PulseTone, ...]
    duration_s: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "tones", tuple(self.tones))
        if not np.isfinite(self.duration_s) or self.duration_s < 0:
            raise ValueError(f"duration_s must be >= 0, got {self.duration_s}")
        pairs = [t.pair for t in self.tones]
        if len(pairs) != len(set(pairs)):
            raise ValueError("at most one tone per pair; superpose amplitudes "
                             "upstream instead of stacking tones")


@dataclass(frozen=True)
class DecoherenceParams:
    """Relaxation and dephasing times of the nuclear qudit.

    Attributes:
        T1_s: Lifetime of each nuclear level in qudit order
            (+3/2, +1/2, -1/2, -3/2); the exit rate of level i is 1/T1_s[i],
            split evenly over its adjacent neighbours.
        T2star_s: Pure-dephasing time of each adjacent coherence, pairs
            (0-1, 1-2, 2-3).
    """

    T1_s: tuple[float, float, float, float]
    T2star_s: tuple[float, float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "T1_s", tuple(float(t) for t in self.T1_s))
        object.__setattr__(self, "T2star_s", tuple(float(t) for t in self.T2star_s))
        if len(self.T1_s) != QUDIT_DIM:
            raise ValueError(f"need {QUDIT_DIM} T1 values, got {len(self.T1_s)}")
        if len(self.T2star_s) != N_PAIRS:
            raise ValueError(f"need {N_PAIRS} T2star values, got {len(self.T2star_s)}")
        for name, values in (("T1_s", self.T1_s), ("T2star_s", self.T2star_s)):
            for t in values:
                if not (t > 0) or not np.isfinite(t):
                    raise ValueError(
                        f"{name} entries must be positive and finite, got {t}")


def default_decoherence() -> DecoherenceParams:
    """Shipped lifetimes: 34 s on |+-3/2>, 17 s on |+-1/2>; T2* 0.28-0.32 ms."""
    return DecoherenceParams(T1_s=(34.0, 17.0, 17.0, 34.0),
                             T2star_s=(0.28e-3, 0.30e-3, 0.32e-3))


def resonant_tone(levels_GHz: np.ndarray, pair: int, rabi_MHz: float,
                  phase_rad: float = 0.0, detuning_Hz: float = 0.0) -> PulseTone:
    """Tone at the pair's transition frequency plus an optional detuning."""
    freq = float(levels_GHz[pair + 1] - levels_GHz[pair]) + detuning_Hz * 1e-9
    return PulseTone(pair=pair, freq_GHz=freq, rabi_MHz=rabi_MHz, phase_rad=phase_rad)


def pi_pulse(levels_GHz: np.ndarray, pair: int, rabi_MHz: float = 5.0,
             phase_rad: float = 0.0) -> PulseSegment:
    """Resonant pi pulse: full population transfer on one pair when closed."""
    tone = resonant_tone(levels_GHz, pair, rabi_MHz, phase_rad)
    return PulseSegment(tones=(tone,), duration_s=1.0 / (2.0 * rabi_MHz * 1e6))


def half_pi_pulse(levels_GHz: np.ndarray, pair: int, rabi_MHz: float = 5.0,
                  phase_rad: float = 0.0, detuning_Hz: float = 0.0) -> PulseSegment:
    """pi/2 pulse at an optionally detuned drive frequency."""
    tone = resonant_tone(levels_GHz, pair, rabi_MHz, phase_rad, detuning_Hz)
    return PulseSegment(tones=(tone,), duration_s=1.0 / (4.0 * rabi_MHz * 1e6))


@dataclass(frozen=True)
class PulseSequence:
    """Named, ordered list of segments."""

    segments: tuple[PulseSegment, ...]
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def total_duration_s(self) -> float:
        return float(sum(s.duration_s for s in self.segments))
