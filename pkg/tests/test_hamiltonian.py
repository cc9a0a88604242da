"""Hamiltonian assembly, Zeeman diagrams, crossings, and the hyperfine fit."""

from __future__ import annotations

import dataclasses
import time

import numpy as np
import pytest

from tbqudit.constants import KB_GHZ_PER_K, MU_B_GHZ_PER_T
from tbqudit.hamiltonian import (
    LabelTrackingError,
    _match_traces,
    analytic_crossing_field,
    build_hamiltonian,
    effective_qudit_levels,
    find_avoided_crossings,
    fit_hyperfine_from_frequencies,
    product_basis_labels,
    transition_frequencies,
    zeeman_diagram,
)
from tbqudit.params import HyperfineParams, SpinSystemParams, default_system

NU_MEASURED = (2.45, 3.13, 3.81)


def no_transverse_system(tunnel_Hz: float = 0.0) -> SpinSystemParams:
    base = default_system()
    ligand = dataclasses.replace(base.ligand, B44_GHz=0.0, B64_GHz=0.0)
    hf = dataclasses.replace(base.hyperfine, tunnel_splitting_Hz=tunnel_Hz)
    return dataclasses.replace(base, ligand=ligand, hyperfine=hf)


def test_dimensions() -> None:
    sys = default_system()
    assert build_hamiltonian(sys, 0.01, include_nuclear=False).shape == (13, 13)
    assert build_hamiltonian(sys, 0.01, include_nuclear=True).shape == (52, 52)
    assert len(product_basis_labels(sys)) == 52


def test_hermiticity_random_fields_and_params() -> None:
    rng = np.random.default_rng(7)
    for _ in range(20):
        base = default_system()
        ligand = dataclasses.replace(
            base.ligand,
            B20_GHz=float(rng.uniform(-2e4, 2e4)),
            B44_GHz=float(rng.uniform(-1e3, 1e3)),
            B64_GHz=float(rng.uniform(-1e3, 1e3)),
        )
        sys = dataclasses.replace(base, ligand=ligand)
        field = float(rng.uniform(-1.0, 1.0))
        for nuclear in (False, True):
            h = build_hamiltonian(sys, field, include_nuclear=nuclear)
            scale = np.max(np.abs(h))
            assert np.max(np.abs(h - h.conj().T)) < 1e-12 * scale


def test_nonfinite_field_rejected() -> None:
    with pytest.raises(ValueError):
        build_hamiltonian(default_system(), float("nan"))
    with pytest.raises(ValueError):
        build_hamiltonian(default_system(), float("inf"))


def test_ground_doublet_and_600K_gap() -> None:
    # Shipped ligand-field set: |Jz = +-6> ground doublet separated from the
    # first excited state by roughly 600 K * k_B/h.
    h = build_hamiltonian(default_system(), 0.0, include_nuclear=False)
    evals, evecs = np.linalg.eigh(h)
    gap_K = (evals[2] - evals[0]) / KB_GHZ_PER_K
    assert abs(gap_K - 600.0) < 30.0
    for k in (0, 1):
        weights = np.abs(evecs[:, k]) ** 2
        assert weights[0] + weights[12] > 0.999


def test_zeeman_slopes_of_extreme_branches() -> None:
    sys = no_transverse_system()
    fields = np.linspace(0.2, 0.3, 5)
    diag = zeeman_diagram(sys, fields, include_nuclear=False)
    slopes = (diag.energies_GHz[-1] - diag.energies_GHz[0]) / (fields[-1] - fields[0])
    by_label = {lab[0]: s for lab, s in zip(diag.labels, slopes)}
    expected = 2 * 6 * sys.g_J * MU_B_GHZ_PER_T
    assert abs((by_label[6.0] - by_label[-6.0]) - expected) < 1e-6 * expected
    # Straight lines: interior points on the chord.
    for k in range(diag.energies_GHz.shape[1]):
        chord = np.interp(fields, [fields[0], fields[-1]],
                          [diag.energies_GHz[0, k], diag.energies_GHz[-1, k]])
        assert np.max(np.abs(diag.energies_GHz[:, k] - chord)) < 1e-8


def test_zeeman_diagram_grid_refinement_consistent() -> None:
    sys = default_system()
    coarse = np.linspace(-0.06, 0.06, 25)
    fine = np.linspace(-0.06, 0.06, 49)
    d_coarse = zeeman_diagram(sys, coarse, include_nuclear=True)
    d_fine = zeeman_diagram(sys, fine, include_nuclear=True)
    # Every coarse field point appears at even indices of the fine grid.
    assert np.allclose(fine[::2], coarse, atol=1e-15)
    assert np.max(np.abs(d_fine.energies_GHz[::2] - d_coarse.energies_GHz)) < 1e-9


def test_zeeman_diagram_input_validation() -> None:
    sys = default_system()
    with pytest.raises(ValueError):
        zeeman_diagram(sys, np.array([0.0]))
    with pytest.raises(ValueError):
        zeeman_diagram(sys, np.array([0.0, 0.0, 0.01]))


def test_label_tracking_failure_raises_with_step() -> None:
    # Three previous basis vectors against an equal three-way mixture: every
    # overlap is 1/3 < 0.5 and continuation must fail, naming the step.
    prev = np.eye(3, dtype=complex)
    theta = 2 * np.pi / 3
    new = np.full((3, 3), 1 / np.sqrt(3), dtype=complex)
    new[1] *= np.exp(1j * theta) ** np.arange(3)
    new[2] *= np.exp(2j * theta) ** np.arange(3)
    with pytest.raises(LabelTrackingError, match="step 5"):
        _match_traces(prev, new, np.zeros(3), np.zeros(3), step_index=5)


def test_crossing_fields_analytic_vs_bisection() -> None:
    sys = default_system()
    t0 = time.perf_counter()
    crossings = find_avoided_crossings(sys, window_T=(-0.06, 0.06))
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    assert len(crossings) == 4
    for c in crossings:
        b_analytic = analytic_crossing_field(sys, c.m_I)
        assert abs(c.field_T - b_analytic) < 1e-4  # 0.1 mT
    fields_mT = sorted(1e3 * c.field_T for c in crossings)
    assert np.allclose(fields_mT, [-37.27, -12.42, 12.42, 37.27], atol=0.02)


def test_crossing_gap_equals_configured_tunnel_splitting() -> None:
    sys = no_transverse_system(tunnel_Hz=20836.612)
    crossings = find_avoided_crossings(sys, window_T=(-0.02, 0.0))
    assert len(crossings) == 1 and crossings[0].m_I == 0.5
    assert abs(crossings[0].gap_Hz - 20836.612) < 0.01 * 20836.612


def test_crossing_gap_zero_without_transverse_terms() -> None:
    # "Zero" up to dense-eigensolver noise (~1e-12 of the 1.4e4 GHz span),
    # far below the ~2e4 Hz physical splitting scale.
    sys = no_transverse_system(tunnel_Hz=0.0)
    crossings = find_avoided_crossings(sys, window_T=(-0.02, 0.0))
    assert crossings[0].gap_Hz < 100.0


def test_crossing_slopes() -> None:
    sys = default_system()
    c = find_avoided_crossings(sys, window_T=(-0.05, -0.02))[0]
    expected = 2 * 6 * sys.g_J * MU_B_GHZ_PER_T * 1e9
    assert abs(c.slope_diff_Hz_per_T - expected) < 1e-4 * expected
    s_plus, s_minus = c.branch_slopes_Hz_per_T
    assert s_plus > 0 > s_minus


def test_hyperfine_fit_measured_triple() -> None:
    fit = fit_hyperfine_from_frequencies(*NU_MEASURED)
    assert abs(fit.A_GHz - 0.5217) < 1e-3
    assert abs(fit.P_GHz - 0.34) < 1e-3
    assert fit.residual_GHz < 1e-12


def test_hyperfine_fit_round_trip() -> None:
    fit = fit_hyperfine_from_frequencies(*NU_MEASURED)
    hf = HyperfineParams(A_GHz=fit.A_GHz, P_GHz=fit.P_GHz)
    levels = effective_qudit_levels(hf, branch=-6.0)
    nus = transition_frequencies(levels)
    assert np.max(np.abs(nus - np.array(NU_MEASURED))) < 1e-9


def test_hyperfine_fit_rejects_bad_order() -> None:
    with pytest.raises(ValueError):
        fit_hyperfine_from_frequencies(3.13, 2.45, 3.81)
    with pytest.raises(ValueError):
        fit_hyperfine_from_frequencies(-1.0, 2.0, 3.0)


def test_effective_levels_gap_structure() -> None:
    rng = np.random.default_rng(11)
    for _ in range(25):
        a = float(rng.uniform(0.1, 2.0))
        p = float(rng.uniform(0.0, a))
        hf = HyperfineParams(A_GHz=a, P_GHz=p)
        nus = transition_frequencies(effective_qudit_levels(hf, branch=-6.0))
        assert np.allclose(nus, [6 * a - 2 * p, 6 * a, 6 * a + 2 * p], atol=1e-12)
        # Opposite branch mirrors the ladder.
        nus_plus = transition_frequencies(effective_qudit_levels(hf, branch=6.0))
        assert np.allclose(nus_plus, [-(6 * a + 2 * p), -6 * a, -(6 * a - 2 * p)],
                           atol=1e-12)


def test_lowest_traces_at_window_edge_are_ground_doublet() -> None:
    sys = default_system()
    diag = zeeman_diagram(sys, np.linspace(-0.06, 0.06, 13), include_nuclear=True)
    order = np.argsort(diag.energies_GHz[-1])[:8]
    for k in order:
        assert abs(diag.labels[k][0]) == 6.0
