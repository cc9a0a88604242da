"""Command line driver producing deterministic CSV and JSON tables.

Every subcommand reads one configuration (``--config``, else the shipped
defaults), resolves one seed (``--seed`` flag, else the ``TBQUDIT_SEED``
environment variable, else the configuration's seed), and writes only to
the paths named on the command line.  Rerunning a command with the same
configuration and seed reproduces the output files byte for byte; wall
clock timing goes to stderr only.

Exit codes: 0 on success, 1 on a validation or runtime failure, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from .config import (
    ExperimentConfig,
    config_to_dict,
    default_config,
    load_config,
    resolve_pulse,
    validate_config,
    with_seed,
)
from .constants import QUDIT_LABELS, QUDIT_M_I
from .gates import CalibrationError, calibrate_hadamard
from .hamiltonian import (
    effective_qudit_levels,
    fit_hyperfine_from_frequencies,
    transition_frequencies,
    zeeman_diagram,
)
from .params import HyperfineParams
from .protocols import (
    crossing_catalog,
    idealized_protocol_config,
    run_configured_sequence,
    run_full_sequence,
    run_scan,
)
from .readout import (
    fit_exponential_lifetime,
    jump_histogram,
    readout_fidelity,
    simulate_jump_events,
    telegraph_trajectory,
)
from .tables import format_float, run_meta, write_csv, write_json

GROUND_DOUBLET_TRACES = 8


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Load, seed-override, and validate the configuration for a command."""
    if args.config is not None:
        config = load_config(args.config)
    else:
        config = default_config()

    seed = args.seed
    if seed is None:
        env = os.environ.get("TBQUDIT_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise ValueError(
                    f"TBQUDIT_SEED must be an integer, got {env!r}")
    if seed is not None:
        config = with_seed(config, seed)

    problems = validate_config(config)
    if problems:
        raise ValueError("invalid configuration:\n  " + "\n  ".join(problems))
    return config


def _meta(config: ExperimentConfig) -> dict:
    return run_meta(config_to_dict(config), config.seed)


def _column_name(label: str) -> str:
    """CSV-safe energy column name from a trace label like Jz+6_mI+3/2."""
    safe = (label.replace("+", "p").replace("-", "m").replace("/", "")
            .lower())
    return f"e_{safe}_GHz"


def _cmd_zeeman(config: ExperimentConfig, args: argparse.Namespace) -> None:
    """Ground-doublet level diagram over the sweep window."""
    lo, hi = config.sweep.window_T
    fields = np.linspace(lo, hi, args.points)
    diagram = zeeman_diagram(config.system, fields, include_nuclear=True)
    table: dict[str, np.ndarray] = {"field_mT": fields * 1e3}
    names = diagram.label_strings()
    for k in range(GROUND_DOUBLET_TRACES):
        table[_column_name(names[k])] = diagram.energies_GHz[:, k]
    write_csv(args.out, table)


def _cmd_crossings(config: ExperimentConfig, args: argparse.Namespace) -> None:
    crossings = crossing_catalog(config)
    table = {
        "m_I": np.array([c.m_I for c in crossings]),
        "field_mT": np.array([c.field_T * 1e3 for c in crossings]),
        "gap_Hz": np.array([c.gap_Hz for c in crossings]),
        "slope_diff_Hz_per_T": np.array(
            [c.slope_diff_Hz_per_T for c in crossings]),
    }
    write_csv(args.out, table)


def _cmd_fit_hf(config: ExperimentConfig, args: argparse.Namespace) -> None:
    """Hyperfine constants from three transition frequencies."""
    if (args.nu01 is None) != (args.nu12 is None) or \
            (args.nu01 is None) != (args.nu23 is None):
        raise ValueError("give all three of --nu01/--nu12/--nu23 or none")
    if args.nu01 is None:
        levels = effective_qudit_levels(config.system.hyperfine)
        nus = transition_frequencies(levels)
    else:
        nus = np.array([args.nu01, args.nu12, args.nu23])
    fit = fit_hyperfine_from_frequencies(*nus)
    fitted = HyperfineParams(
        A_GHz=fit.A_GHz, P_GHz=fit.P_GHz,
        tunnel_splitting_Hz=config.system.hyperfine.tunnel_splitting_Hz)
    levels = effective_qudit_levels(fitted)
    payload = {
        "A_GHz": fit.A_GHz,
        "P_GHz": fit.P_GHz,
        "residual_GHz": fit.residual_GHz,
        "input_frequencies_GHz": list(nus),
        "levels_GHz": list(levels),
        "fitted_frequencies_GHz": list(transition_frequencies(levels)),
        "meta": _meta(config),
    }
    write_json(args.out, payload)


def _cmd_scan(config: ExperimentConfig, args: argparse.Namespace,
              kind: str) -> None:
    table = run_scan(config, kind,
                     sample_shots=not getattr(args, "ideal", False))
    write_csv(args.out, table)


def _cmd_hadamard(config: ExperimentConfig, args: argparse.Namespace) -> None:
    h = config.experiments.hadamard
    levels = effective_qudit_levels(config.system.hyperfine)
    cal = calibrate_hadamard(levels, h.omega_budget_MHz,
                             start_level=h.start_level)
    payload = {
        "start_level": cal.start_level,
        "duration_ns": cal.duration_s * 1e9,
        "tones": [{"pair": t.pair, "freq_GHz": t.freq_GHz,
                   "rabi_MHz": t.rabi_MHz, "phase_rad": t.phase_rad}
                  for t in cal.segment.tones],
        "populations": list(cal.populations),
        "cost": cal.cost,
        "evaluations": cal.evaluations,
        "meta": _meta(config),
    }
    write_json(args.out, payload)


def _cmd_hysteresis(config: ExperimentConfig,
                    args: argparse.Namespace) -> None:
    """Jump-field collection, binned histogram, and cluster summary."""
    s = config.experiments.hysteresis
    crossings = crossing_catalog(config)
    rng = np.random.default_rng([config.seed, 1])
    events = simulate_jump_events(crossings, config.sweep,
                                  config.decoherence, rng, s.n_events)
    hist = jump_histogram(events, bin_width_T=s.bin_width_T)
    centers = 0.5 * (hist.bin_edges_T[:-1] + hist.bin_edges_T[1:])
    write_csv(args.out, {"bin_center_mT": centers * 1e3,
                         "count": hist.counts})
    if args.events_out is not None:
        write_csv(args.events_out, {
            "field_mT": np.array([e.field_T * 1e3 for e in events]),
            "sweep_index": np.array([e.sweep_index for e in events]),
            "direction": np.array([e.direction for e in events]),
            "m_I": np.array([e.m_I for e in events]),
        })
    if args.summary_out is not None:
        write_json(args.summary_out, {
            "n_events": len(events),
            "bin_width_mT": s.bin_width_T * 1e3,
            "clusters": [{"mean_mT": c.mean_T * 1e3,
                          "sigma_mT": c.sigma_T * 1e3,
                          "weight": c.weight,
                          "n_events": c.n_events}
                         for c in hist.clusters],
            "crossing_fields_mT": [c.field_T * 1e3 for c in crossings],
            "meta": _meta(config),
        })


def _cmd_t1(config: ExperimentConfig, args: argparse.Namespace) -> None:
    """Telegraph trajectory long enough to fit every level's lifetime.

    The trajectory length starts from the expected dwell yield and doubles
    until every level has the requested count, so small requests cannot
    fall short by fluctuation.
    """
    per_level = config.experiments.lifetime.dwells_per_level
    duration = 160.0 * per_level
    for attempt in range(12):
        rng = np.random.default_rng([config.seed, 2, attempt])
        trace = telegraph_trajectory(config.decoherence, duration, rng)
        dwells = trace.dwell_times_by_level()
        if all(len(dwells[k]) >= per_level for k in range(len(QUDIT_M_I))):
            break
        duration *= 2.0
    else:
        raise RuntimeError(
            f"could not collect {per_level} dwells per level")
    results = []
    for level in range(len(QUDIT_M_I)):
        level_dwells = np.asarray(dwells[level])[:per_level]
        fit = fit_exponential_lifetime(level_dwells)
        results.append({
            "level": level,
            "m_I": QUDIT_M_I[level],
            "T1_s": fit.T1_s,
            "ci_low_s": fit.ci_low_s,
            "ci_high_s": fit.ci_high_s,
            "n_dwells": fit.n_dwells,
        })
    write_json(args.out, {"levels": results, "meta": _meta(config)})
    if args.dwells_out is not None:
        level_col: list[int] = []
        dwell_col: list[float] = []
        for level in range(len(QUDIT_M_I)):
            chunk = dwells[level][:per_level]
            level_col.extend([level] * len(chunk))
            dwell_col.extend(chunk)
        write_csv(args.dwells_out, {"level": np.array(level_col),
                                    "dwell_s": np.array(dwell_col)})


def _cmd_fidelity(config: ExperimentConfig, args: argparse.Namespace) -> None:
    t = config.experiments.fidelity.sequence_time_s
    rows = []
    for level, (m, T1) in enumerate(zip(QUDIT_M_I, config.decoherence.T1_s)):
        rows.append({"level": level, "m_I": m, "T1_s": T1,
                     "fidelity": readout_fidelity(T1, t)})
    note = ("exp(-5/34) = 0.863, so a 93% readout fidelity cannot come from "
            "a 5 s sequence with T1 = 34 s; 93% matches exp(-2.4/34). This "
            "table uses exp(-t/T1) with the sequence time given here.")
    write_json(args.out, {"sequence_time_s": t, "per_level": rows,
                          "consistency_note": note, "meta": _meta(config)})


def _cmd_sequence(config: ExperimentConfig, args: argparse.Namespace) -> None:
    """Repeated init, pi pulse, probe protocol with outcome frequencies."""
    seq = config.experiments.sequence
    reps = args.reps if args.reps is not None else seq.reps
    if args.ideal:
        run_config = idealized_protocol_config(config)
        segments = resolve_pulse(run_config, seq.pulse)
        report = run_full_sequence(run_config, segments, seq.init_target_m_I,
                                   reps, max_sweeps=seq.max_sweeps,
                                   initial_m_I=seq.init_target_m_I)
    else:
        report = run_configured_sequence(config, reps=reps)
    freqs = report.detection_frequencies()
    detected = [o for o in report.outcomes if o.detected_m_I is not None]
    payload = {
        "reps": reps,
        "ideal": bool(args.ideal),
        "n_detected": report.n_detected,
        "degraded": report.degraded,
        "populations_modeled": list(report.populations_modeled),
        "frequencies": {QUDIT_LABELS[i]: freqs.get(m, 0.0)
                        for i, m in enumerate(QUDIT_M_I)},
        "mean_elapsed_s": (float(np.mean([o.elapsed_s for o in detected]))
                           if detected else None),
        "mean_init_sweeps": (float(np.mean([o.init_sweeps for o in detected]))
                             if detected else None),
        "meta": _meta(config),
    }
    write_json(args.out, payload)


def _cmd_validate(config_path: str | None) -> int:
    try:
        config = load_config(config_path) if config_path else default_config()
    except ValueError as exc:
        print(exc)
        return 1
    problems = validate_config(config)
    if problems:
        for p in problems:
            print(p)
        return 1
    print("configuration valid")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tbqudit",
        description="Deterministic tables for the nuclear-qudit simulator.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--seed", type=int,
                        help="override the configured seed")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, doc: str, out: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=doc, description=doc)
        if out:
            p.add_argument("--out", required=True,
                           help="output file to write")
        return p

    p = add("zeeman", "ground-doublet energies versus field (CSV)")
    p.add_argument("--points", type=int, default=241,
                   help="field grid size (default 241)")
    add("crossings", "avoided-crossing catalog (CSV)")
    p = add("fit-hf", "hyperfine fit from transition frequencies (JSON)")
    p.add_argument("--nu01", type=float, help="lowest gap, GHz")
    p.add_argument("--nu12", type=float, help="middle gap, GHz")
    p.add_argument("--nu23", type=float, help="highest gap, GHz")
    p = add("rabi", "Rabi oscillation scan (CSV)")
    p.add_argument("--ideal", action="store_true",
                   help="skip shot sampling, write exact populations")
    p = add("ramsey", "Ramsey fringe scan (CSV)")
    p.add_argument("--ideal", action="store_true",
                   help="skip shot sampling, write exact populations")
    add("hadamard", "equal-superposition pulse calibration (JSON)")
    add("grover", "search-drive duration scan (CSV)")
    p = add("hysteresis", "jump-field histogram (CSV)")
    p.add_argument("--events-out", help="also write the raw events CSV")
    p.add_argument("--summary-out", help="also write cluster summary JSON")
    p = add("t1", "level lifetimes from a telegraph trajectory (JSON)")
    p.add_argument("--dwells-out", help="also write the dwell-time CSV")
    add("fidelity", "readout fidelity versus sequence time (JSON)")
    p = add("sequence", "full protocol repetitions (JSON)")
    p.add_argument("--reps", type=int, help="override repetition count")
    p.add_argument("--ideal", action="store_true",
                   help="run the deterministic-readout variant")
    add("validate", "check a configuration and list problems", out=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        if args.command == "validate":
            return _cmd_validate(args.config)
        config = _resolve_config(args)
        runners = {
            "zeeman": _cmd_zeeman,
            "crossings": _cmd_crossings,
            "fit-hf": _cmd_fit_hf,
            "rabi": lambda c, a: _cmd_scan(c, a, "rabi"),
            "ramsey": lambda c, a: _cmd_scan(c, a, "ramsey"),
            "hadamard": _cmd_hadamard,
            "grover": lambda c, a: _cmd_scan(c, a, "grover"),
            "hysteresis": _cmd_hysteresis,
            "t1": _cmd_t1,
            "fidelity": _cmd_fidelity,
            "sequence": _cmd_sequence,
        }
        runners[args.command](config, args)
    except (ValueError, OSError, RuntimeError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - started
    print(f"{args.command}: wrote {args.out} ({elapsed:.1f} s)",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
