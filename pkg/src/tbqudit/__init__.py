"""Single-molecule-magnet nuclear-spin qudit simulator.

A numpy/scipy library modeling a Tb(III) double-decker molecule as a
four-level nuclear qudit: ligand-field Hamiltonian construction, avoided
level crossings, Landau-Zener readout sweeps, telegraph relaxation, and
multilevel pulse dynamics up to Hadamard and Grover sequences.
"""

from __future__ import annotations

from .config import (
    ExperimentConfig,
    ExperimentSettings,
    config_from_dict,
    config_to_dict,
    default_config,
    default_pulse_table,
    load_config,
    resolve_pulse,
    save_config,
    validate_config,
    with_seed,
)
from .constants import (
    ELECTRONIC_DIM,
    ELECTRONIC_J,
    KB_GHZ_PER_K,
    MU_B_GHZ_PER_T,
    NUCLEAR_SPIN,
    QUDIT_DIM,
    QUDIT_LABELS,
    QUDIT_M_I,
    lande_g_factor,
)
from .dynamics import (
    QuditState,
    StepSizeUnderflowError,
    drive_hamiltonian_rwa,
    evolve_open,
    evolve_unitary,
    rabi_experiment,
    ramsey_experiment,
    segment_propagator_rwa,
)
from .gates import (
    CalibrationError,
    HadamardCalibration,
    SearchPulse,
    build_search_pulse,
    calibrate_hadamard,
    discrete_grover_populations,
    grover_run,
    phase_inverted,
)
from .landau_zener import flip_probability, swept_two_level_flip_probability
from .hamiltonian import (
    CrossingInfo,
    HyperfineFit,
    LabelTrackingError,
    ZeemanDiagram,
    analytic_crossing_field,
    build_hamiltonian,
    effective_qudit_levels,
    find_avoided_crossings,
    fit_hyperfine_from_frequencies,
    product_basis_labels,
    transition_frequencies,
    zeeman_diagram,
)
from .operators import angular_momentum_ops, projection_values, stevens_operator
from .params import (
    HyperfineParams,
    LigandFieldParams,
    SpinSystemParams,
    default_system,
    tb_hyperfine,
    tb_ligand_field,
)
from .protocols import (
    SequenceOutcome,
    SequenceReport,
    classify_jump_field,
    crossing_catalog,
    grover_scan,
    idealized_protocol_config,
    qudit_level_index,
    rabi_scan,
    ramsey_scan,
    run_configured_sequence,
    run_full_sequence,
    run_scan,
)
from .pulses import (
    DecoherenceParams,
    PulseSegment,
    PulseSequence,
    PulseTone,
    default_decoherence,
    half_pi_pulse,
    pi_pulse,
    resonant_tone,
)
from .readout import (
    GaussianCluster,
    InitializationResult,
    JumpEvent,
    JumpHistogram,
    LifetimeFit,
    MoleculeState,
    SweepConfig,
    TelegraphTrace,
    advance_telegraph,
    fit_exponential_lifetime,
    initialize_state,
    jump_histogram,
    readout_fidelity,
    simulate_jump_events,
    sweep_once,
    telegraph_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "ELECTRONIC_DIM",
    "ELECTRONIC_J",
    "KB_GHZ_PER_K",
    "MU_B_GHZ_PER_T",
    "NUCLEAR_SPIN",
    "QUDIT_DIM",
    "QUDIT_LABELS",
    "QUDIT_M_I",
    "CalibrationError",
    "CrossingInfo",
    "DecoherenceParams",
    "ExperimentConfig",
    "ExperimentSettings",
    "GaussianCluster",
    "HadamardCalibration",
    "HyperfineFit",
    "HyperfineParams",
    "InitializationResult",
    "JumpEvent",
    "JumpHistogram",
    "LabelTrackingError",
    "LifetimeFit",
    "LigandFieldParams",
    "MoleculeState",
    "PulseSegment",
    "PulseSequence",
    "PulseTone",
    "QuditState",
    "SearchPulse",
    "SequenceOutcome",
    "SequenceReport",
    "SpinSystemParams",
    "StepSizeUnderflowError",
    "SweepConfig",
    "TelegraphTrace",
    "ZeemanDiagram",
    "advance_telegraph",
    "analytic_crossing_field",
    "angular_momentum_ops",
    "build_hamiltonian",
    "build_search_pulse",
    "calibrate_hadamard",
    "classify_jump_field",
    "config_from_dict",
    "config_to_dict",
    "crossing_catalog",
    "default_config",
    "default_decoherence",
    "default_pulse_table",
    "default_system",
    "discrete_grover_populations",
    "drive_hamiltonian_rwa",
    "effective_qudit_levels",
    "evolve_open",
    "evolve_unitary",
    "find_avoided_crossings",
    "fit_exponential_lifetime",
    "fit_hyperfine_from_frequencies",
    "flip_probability",
    "grover_run",
    "grover_scan",
    "half_pi_pulse",
    "idealized_protocol_config",
    "initialize_state",
    "jump_histogram",
    "lande_g_factor",
    "load_config",
    "phase_inverted",
    "pi_pulse",
    "product_basis_labels",
    "projection_values",
    "qudit_level_index",
    "rabi_experiment",
    "rabi_scan",
    "ramsey_experiment",
    "ramsey_scan",
    "readout_fidelity",
    "resolve_pulse",
    "resonant_tone",
    "run_configured_sequence",
    "run_full_sequence",
    "run_scan",
    "save_config",
    "segment_propagator_rwa",
    "simulate_jump_events",
    "stevens_operator",
    "sweep_once",
    "swept_two_level_flip_probability",
    "tb_hyperfine",
    "tb_ligand_field",
    "telegraph_trajectory",
    "transition_frequencies",
    "validate_config",
    "with_seed",
    "zeeman_diagram",
]
