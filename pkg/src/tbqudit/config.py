"""Experiment configuration: typed tree, JSON round-trip, validation.

A single :class:`ExperimentConfig` carries everything a run needs: the
static spin system, the sweep settings, decoherence times, per-experiment
knobs, and the random seed.  ``load_config``/``save_config`` map it to a
stable JSON layout; :func:`validate_config` returns a list of path-named
problems (empty means valid) instead of raising, so a command-line driver
can print all of them at once.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .hamiltonian import effective_qudit_levels
from .params import (
    HyperfineParams,
    LigandFieldParams,
    SpinSystemParams,
    tb_hyperfine,
    tb_ligand_field,
)
from .pulses import (
    DecoherenceParams,
    PulseSegment,
    default_decoherence,
    half_pi_pulse,
    pi_pulse,
    resonant_tone,
)
from .readout import SweepConfig


@dataclass(frozen=True)
class RabiSettings:
    pair: int = 0
    rabi_MHz: float = 5.0
    max_duration_s: float = 1e-6
    points: int = 81
    shots: int = 1000


@dataclass(frozen=True)
class RamseySettings:
    pair: int = 0
    detuning_Hz: float = 1e4
    max_delay_s: float = 6e-4
    points: int = 121
    shots: int = 1000


@dataclass(frozen=True)
class HadamardSettings:
    omega_budget_MHz: float = 5.0
    start_level: int = 0


@dataclass(frozen=True)
class GroverSettings:
    marked: int = 2
    points: int = 81
    max_duration_factor: float = 2.0


@dataclass(frozen=True)
class HysteresisSettings:
    n_events: int = 75_000
    bin_width_T: float = 1e-3


@dataclass(frozen=True)
class LifetimeSettings:
    dwells_per_level: int = 2000


@dataclass(frozen=True)
class FidelitySettings:
    sequence_time_s: float = 2.4


@dataclass(frozen=True)
class SequenceSettings:
    """Full init-manipulate-probe protocol repetitions.

    ``pulse`` names an entry of the config's pulse table; the shipped
    table defines "pi01" (resonant pi pulse on the lowest pair) and
    "idle" (no manipulation).
    """

    init_target_m_I: float = 1.5
    pulse: str = "pi01"
    reps: int = 100
    max_sweeps: int = 10_000


@dataclass(frozen=True)
class ExperimentSettings:
    rabi: RabiSettings = field(default_factory=RabiSettings)
    ramsey: RamseySettings = field(default_factory=RamseySettings)
    hadamard: HadamardSettings = field(default_factory=HadamardSettings)
    grover: GroverSettings = field(default_factory=GroverSettings)
    hysteresis: HysteresisSettings = field(default_factory=HysteresisSettings)
    lifetime: LifetimeSettings = field(default_factory=LifetimeSettings)
    fidelity: FidelitySettings = field(default_factory=FidelitySettings)
    sequence: SequenceSettings = field(default_factory=SequenceSettings)


def default_pulse_table() -> dict:
    """Shipped named pulses: a pi pulse on the lowest pair, and nothing."""
    return {"pi01": [{"kind": "pi", "pair": 0, "rabi_MHz": 5.0}],
            "idle": []}


@dataclass(frozen=True)
class ExperimentConfig:
    system: SpinSystemParams = field(default_factory=SpinSystemParams)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    decoherence: DecoherenceParams = field(default_factory=default_decoherence)
    pulses: dict = field(default_factory=default_pulse_table)
    experiments: ExperimentSettings = field(default_factory=ExperimentSettings)
    seed: int = 20260822


def default_config() -> ExperimentConfig:
    return ExperimentConfig()


def config_to_dict(config: ExperimentConfig) -> dict:
    """Plain-JSON-types dictionary form of a config."""
    out = asdict(config)
    out["sweep"]["window_T"] = list(config.sweep.window_T)
    out["decoherence"]["T1_s"] = list(config.decoherence.T1_s)
    out["decoherence"]["T2star_s"] = list(config.decoherence.T2star_s)
    return out


def _build(cls, data: dict, path: str):
    """Construct a flat dataclass from a dict, rejecting unknown keys.

    Construction errors are re-raised with the config path prefixed so a
    bad file names the section that broke.
    """
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        return cls(**data)
    except ValueError as err:
        raise ValueError(f"{path}: {err}") from err


def config_from_dict(data: dict) -> ExperimentConfig:
    """Inverse of :func:`config_to_dict`; unknown keys raise ValueError."""
    known_top = {"system", "sweep", "decoherence", "pulses", "experiments",
                 "seed"}
    unknown = set(data) - known_top
    if unknown:
        raise ValueError(f"config: unknown keys {sorted(unknown)}")
    system_data = dict(data.get("system", {}))
    ligand = _build(LigandFieldParams,
                    dict(system_data.pop("ligand", asdict(tb_ligand_field()))),
                    "system.ligand")
    hyperfine = _build(HyperfineParams,
                       dict(system_data.pop("hyperfine", asdict(tb_hyperfine()))),
                       "system.hyperfine")
    system = _build(SpinSystemParams,
                    {**system_data, "ligand": ligand, "hyperfine": hyperfine},
                    "system")
    sweep_data = dict(data.get("sweep", {}))
    if "window_T" in sweep_data:
        sweep_data["window_T"] = tuple(sweep_data["window_T"])
    sweep = _build(SweepConfig, sweep_data, "sweep")
    dec_data = dict(data.get("decoherence", {}))
    dec_defaults = default_decoherence()
    try:
        dec = DecoherenceParams(
            T1_s=tuple(dec_data.get("T1_s", dec_defaults.T1_s)),
            T2star_s=tuple(dec_data.get("T2star_s", dec_defaults.T2star_s)))
    except ValueError as err:
        raise ValueError(f"decoherence: {err}") from err
    exp_data = dict(data.get("experiments", {}))
    sections = {
        "rabi": RabiSettings, "ramsey": RamseySettings,
        "hadamard": HadamardSettings, "grover": GroverSettings,
        "hysteresis": HysteresisSettings, "lifetime": LifetimeSettings,
        "fidelity": FidelitySettings, "sequence": SequenceSettings,
    }
    unknown = set(exp_data) - set(sections)
    if unknown:
        raise ValueError(f"experiments: unknown sections {sorted(unknown)}")
    built = {name: _build(cls, dict(exp_data.get(name, {})), f"experiments.{name}")
             for name, cls in sections.items()}
    experiments = ExperimentSettings(**built)
    pulses = data.get("pulses", default_pulse_table())
    if not isinstance(pulses, dict):
        raise ValueError(
            f"pulses: must be a name-to-segments table, got {type(pulses).__name__}")
    pulses = {str(name): ([dict(seg) if isinstance(seg, dict) else seg
                           for seg in segments]
                          if isinstance(segments, (list, tuple)) else segments)
              for name, segments in pulses.items()}
    return ExperimentConfig(system=system, sweep=sweep, decoherence=dec,
                            pulses=pulses, experiments=experiments,
                            seed=int(data.get("seed", ExperimentConfig.seed)))


def save_config(config: ExperimentConfig, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n")


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a JSON config; missing sections fall back to defaults."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}: not valid JSON ({err})") from err
    if not isinstance(data, dict):
        raise ValueError(f"{path}: top level must be a JSON object")
    return config_from_dict(data)


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    return replace(config, seed=seed)


_SEGMENT_KEYS = {
    "pi": {"kind", "pair", "rabi_MHz", "phase_rad"},
    "half_pi": {"kind", "pair", "rabi_MHz", "phase_rad", "detuning_Hz"},
    "delay": {"kind", "duration_s"},
    "tones": {"kind", "duration_s", "tones"},
}
_TONE_KEYS = {"pair", "rabi_MHz", "phase_rad", "detuning_Hz"}


def _segment_spec_problems(seg, path: str) -> list[str]:
    if not isinstance(seg, dict):
        return [f"{path}: segment spec must be an object, got "
                f"{type(seg).__name__}"]
    kind = seg.get("kind")
    if kind not in _SEGMENT_KEYS:
        return [f"{path}.kind: must be one of {sorted(_SEGMENT_KEYS)}, "
                f"got {kind!r}"]
    problems = []
    unknown = set(seg) - _SEGMENT_KEYS[kind]
    if unknown:
        problems.append(f"{path}: unknown keys {sorted(unknown)} "
                        f"for kind {kind!r}")
    if kind in ("pi", "half_pi"):
        if seg.get("pair") not in (0, 1, 2):
            problems.append(f"{path}.pair: must be 0..2, got {seg.get('pair')!r}")
        rabi = seg.get("rabi_MHz")
        if not isinstance(rabi, (int, float)) or not rabi > 0:
            problems.append(f"{path}.rabi_MHz: must be positive, got {rabi!r}")
    if kind == "delay":
        dur = seg.get("duration_s")
        if not isinstance(dur, (int, float)) or dur < 0:
            problems.append(f"{path}.duration_s: must be >= 0, got {dur!r}")
    if kind == "tones":
        dur = seg.get("duration_s")
        if not isinstance(dur, (int, float)) or dur < 0:
            problems.append(f"{path}.duration_s: must be >= 0, got {dur!r}")
        tones = seg.get("tones")
        if not isinstance(tones, (list, tuple)) or not tones:
            problems.append(f"{path}.tones: must be a non-empty list")
        else:
            for j, tone in enumerate(tones):
                if not isinstance(tone, dict):
                    problems.append(f"{path}.tones[{j}]: must be an object")
                    continue
                unknown = set(tone) - _TONE_KEYS
                if unknown:
                    problems.append(
                        f"{path}.tones[{j}]: unknown keys {sorted(unknown)}")
                if tone.get("pair") not in (0, 1, 2):
                    problems.append(f"{path}.tones[{j}].pair: must be 0..2, "
                                    f"got {tone.get('pair')!r}")
    return problems


def _pulse_table_problems(pulses) -> list[str]:
    if not isinstance(pulses, dict):
        return [f"pulses: must be a name-to-segments table, got "
                f"{type(pulses).__name__}"]
    problems = []
    for name, segments in pulses.items():
        path = f"pulses.{name}"
        if not isinstance(segments, (list, tuple)):
            problems.append(f"{path}: must be a list of segment specs, got "
                            f"{type(segments).__name__}")
            continue
        for i, seg in enumerate(segments):
            problems.extend(_segment_spec_problems(seg, f"{path}[{i}]"))
    return problems


def resolve_pulse(config: ExperimentConfig, name: str) -> list[PulseSegment]:
    """Turn one named entry of the pulse table into playable segments.

    Tone frequencies are resolved against the configured hyperfine level
    structure, so the same table entry tracks a changed A or P.

    Raises:
        ValueError: If the name is absent from the table or a segment
            spec is malformed (diagnostics name the offending path).
    """
    if name not in config.pulses:
        raise ValueError(f"unknown pulse name {name!r}; "
                         f"defined pulses: {sorted(config.pulses)}")
    problems = _pulse_table_problems({name: config.pulses[name]})
    if problems:
        raise ValueError("; ".join(problems))
    levels = effective_qudit_levels(config.system.hyperfine)
    segments = []
    for seg in config.pulses[name]:
        kind = seg["kind"]
        if kind == "pi":
            segments.append(pi_pulse(levels, seg["pair"], seg["rabi_MHz"],
                                     seg.get("phase_rad", 0.0)))
        elif kind == "half_pi":
            segments.append(half_pi_pulse(levels, seg["pair"],
                                          seg["rabi_MHz"],
                                          seg.get("phase_rad", 0.0),
                                          seg.get("detuning_Hz", 0.0)))
        elif kind == "delay":
            segments.append(PulseSegment(tones=(),
                                         duration_s=seg["duration_s"]))
        else:
            tones = tuple(
                resonant_tone(levels, tone["pair"], tone["rabi_MHz"],
                              tone.get("phase_rad", 0.0),
                              tone.get("detuning_Hz", 0.0))
                for tone in seg["tones"])
            segments.append(PulseSegment(tones=tones,
                                         duration_s=seg["duration_s"]))
    return segments


def validate_config(config: ExperimentConfig) -> list[str]:
    """All detectable problems, each prefixed with its config path."""
    problems: list[str] = []
    try:
        config.system.validate()
    except ValueError as err:
        problems.append(f"system: {err}")
    hf = config.system.hyperfine
    if hf.A_GHz <= 0:
        problems.append(f"system.hyperfine.A_GHz: must be positive, got {hf.A_GHz}")
    if not np.isfinite(hf.P_GHz):
        problems.append(f"system.hyperfine.P_GHz: must be finite, got {hf.P_GHz}")
    exp = config.experiments
    if exp.rabi.pair not in range(3):
        problems.append(f"experiments.rabi.pair: must be 0..2, got {exp.rabi.pair}")
    if exp.rabi.rabi_MHz <= 0:
        problems.append("experiments.rabi.rabi_MHz: must be positive, "
                        f"got {exp.rabi.rabi_MHz}")
    if exp.rabi.points < 2:
        problems.append(f"experiments.rabi.points: need >= 2, got {exp.rabi.points}")
    if exp.rabi.shots < 1:
        problems.append(f"experiments.rabi.shots: need >= 1, got {exp.rabi.shots}")
    if exp.ramsey.pair not in range(3):
        problems.append(f"experiments.ramsey.pair: must be 0..2, got {exp.ramsey.pair}")
    if exp.ramsey.points < 2:
        problems.append(f"experiments.ramsey.points: need >= 2, got {exp.ramsey.points}")
    if exp.hadamard.omega_budget_MHz <= 0:
        problems.append("experiments.hadamard.omega_budget_MHz: must be positive, "
                        f"got {exp.hadamard.omega_budget_MHz}")
    if exp.hadamard.start_level not in range(4):
        problems.append("experiments.hadamard.start_level: must be 0..3, "
                        f"got {exp.hadamard.start_level}")
    if exp.grover.marked not in range(4):
        problems.append(f"experiments.grover.marked: must be 0..3, got {exp.grover.marked}")
    if exp.hysteresis.n_events < 1:
        problems.append("experiments.hysteresis.n_events: need >= 1, "
                        f"got {exp.hysteresis.n_events}")
    if exp.lifetime.dwells_per_level < 2:
        problems.append("experiments.lifetime.dwells_per_level: need >= 2, "
                        f"got {exp.lifetime.dwells_per_level}")
    if exp.fidelity.sequence_time_s < 0:
        problems.append("experiments.fidelity.sequence_time_s: must be >= 0, "
                        f"got {exp.fidelity.sequence_time_s}")
    seq = exp.sequence
    if not any(abs(seq.init_target_m_I - m) < 1e-9 for m in (1.5, 0.5, -0.5, -1.5)):
        problems.append("experiments.sequence.init_target_m_I: must be a "
                        f"half-integer in [-3/2, 3/2], got {seq.init_target_m_I}")
    problems.extend(_pulse_table_problems(config.pulses))
    if isinstance(config.pulses, dict) and seq.pulse not in config.pulses:
        problems.append(
            f"experiments.sequence.pulse: unknown pulse name {seq.pulse!r}; "
            f"defined pulses: {sorted(config.pulses)}")
    if seq.reps < 1:
        problems.append(f"experiments.sequence.reps: need >= 1, got {seq.reps}")
    # Physics consistency: a traversal must be short against the nuclear
    # lifetimes or the frozen-nucleus sweep model breaks down.
    traversal = config.sweep.traversal_time_s
    min_t1 = min(config.decoherence.T1_s)
    if traversal > min_t1 / 10.0:
        problems.append(
            "sweep: traversal time "
            f"{traversal:g} s exceeds min(T1)/10 = {min_t1 / 10:g} s; "
            "slow sweeps violate the frozen-nucleus traversal model")
    if config.seed < 0:
        problems.append(f"seed: must be >= 0, got {config.seed}")
    return problems
