"""Spin Hamiltonian assembly, level diagrams, crossings, and the qudit ladder.

The full Hamiltonian on the 52-dimensional product space (J = 6 electronic,
I = 3/2 nuclear) is, with every energy expressed as a frequency in GHz,

    H = H_lf x 1  +  g_J (mu_B/h) B (Jz x 1)  +  A (J . I)
        + P (1 x (Iz^2 - I(I+1)/3))  +  (delta_nu / 2) (|+J><-J| + h.c.) x 1

where ``H_lf`` is the tetragonal Stevens expansion and ``delta_nu`` is the
configured tunnel splitting of the ground doublet.  The product basis is
ordered electronic-major: index ``i_el * (2I+1) + i_nuc`` with both factors
in descending projection order, so basis state 0 is ``(m_J = +6, m_I = +3/2)``.

Level crossings between the ``Jz = +-J`` branches that conserve the nuclear
projection are located analytically (``B* = -A m_I / (g_J mu_B/h)``) and
refined by bisection on the diabatic branch-energy difference of the
numerically diagonalized Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import MU_B_GHZ_PER_T
from .operators import angular_momentum_ops, projection_values, stevens_operator
from .params import HyperfineParams, SpinSystemParams


class LabelTrackingError(RuntimeError):
    """Raised when eigenvector-overlap label tracking cannot assign a trace."""


@dataclass(frozen=True)
class CrossingInfo:
    """One nuclear-spin-conserving avoided crossing of the ground doublet.

    Attributes:
        field_T: Crossing field in tesla (bisection-refined).
        m_I: Conserved nuclear projection at the crossing.
        gap_Hz: Minimum eigenvalue separation at the crossing, in Hz.
        branch_slopes_Hz_per_T: Diabatic slopes (dE/dB) of the
            ``Jz = +J`` and ``Jz = -J`` branches, in Hz per tesla.
    """

    field_T: float
    m_I: float
    gap_Hz: float
    branch_slopes_Hz_per_T: tuple[float, float]

    @property
    def slope_diff_Hz_per_T(self) -> float:
        return abs(self.branch_slopes_Hz_per_T[0] - self.branch_slopes_Hz_per_T[1])


@dataclass(frozen=True)
class HyperfineFit:
    """Result of the hyperfine/quadrupole fit to three transition frequencies."""

    A_GHz: float
    P_GHz: float
    residual_GHz: float


@dataclass
class ZeemanDiagram:
    """Energy traces versus field with adiabatic-continuation labels.

    ``energies_GHz[i, k]`` is the energy of trace ``k`` at ``fields_T[i]``;
    trace labels are ``(m_J, m_I)`` tuples of the dominant basis character at
    the first field point (``m_I`` is None for electronic-only diagrams).
    """

    fields_T: np.ndarray
    energies_GHz: np.ndarray
    labels: list[tuple[float, float | None]]

    def label_strings(self) -> list[str]:
        out = []
        for m_j, m_i in self.labels:
            s = f"Jz{m_j:+g}"
            if m_i is not None:
                s += f"_mI{_half_str(m_i)}"
            out.append(s)
        return out


def _half_str(m: float) -> str:
    """Render a half-integer as e.g. +3/2 without a decimal point."""
    twice = int(round(2 * m))
    if twice % 2 == 0:
        return f"{twice // 2:+d}"
    return f"{'+' if twice > 0 else '-'}{abs(twice)}/2"


def product_basis_labels(system: SpinSystemParams) -> list[tuple[float, float]]:
    """(m_J, m_I) labels of the product basis, electronic-major order."""
    mjs = projection_values(system.J)
    mis = projection_values(system.I)
    return [(float(mj), float(mi)) for mj in mjs for mi in mis]


def _ligand_field_matrix(system: SpinSystemParams) -> np.ndarray:
    lf = system.ligand
    j = system.J
    return (lf.alpha * lf.B20_GHz * stevens_operator(2, 0, j)
            + lf.beta * (lf.B40_GHz * stevens_operator(4, 0, j)
                         + lf.B44_GHz * stevens_operator(4, 4, j))
            + lf.gamma * (lf.B60_GHz * stevens_operator(6, 0, j)
                          + lf.B64_GHz * stevens_operator(6, 4, j)))


def _doublet_coupling(system: SpinSystemParams) -> np.ndarray:
    """Phenomenological (delta_nu/2)(|+J><-J| + h.c.) on the electronic space."""
    dim = int(round(2 * system.J)) + 1
    out = np.zeros((dim, dim), dtype=complex)
    half_gap_GHz = 0.5 * system.hyperfine.tunnel_splitting_Hz * 1e-9
    out[0, dim - 1] = half_gap_GHz
    out[dim - 1, 0] = half_gap_GHz
    return out


@lru_cache(maxsize=8)
def _hamiltonian_parts(system: SpinSystemParams, include_nuclear: bool) -> tuple[np.ndarray, np.ndarray]:
    """Field-independent part and the operator multiplying B, both in GHz."""
    jx, jy, jz, _, _ = angular_momentum_ops(system.J)
    h_el_static = _ligand_field_matrix(system) + _doublet_coupling(system)
    zeeman_op = system.g_J * MU_B_GHZ_PER_T * jz
    if not include_nuclear:
        return h_el_static, zeeman_op
    ix, iy, iz, _, _ = angular_momentum_ops(system.I)
    dim_n = iz.shape[0]
    eye_n = np.eye(dim_n)
    eye_e = np.eye(jz.shape[0])
    hf = system.hyperfine
    static = (np.kron(h_el_static, eye_n)
              + hf.A_GHz * (np.kron(jx, ix) + np.kron(jy, iy) + np.kron(jz, iz))
              + hf.P_GHz * np.kron(eye_e, iz @ iz - (system.I * (system.I + 1) / 3.0) * eye_n))
    return static, np.kron(zeeman_op, eye_n)


def build_hamiltonian(system: SpinSystemParams, field_T: float,
                      include_nuclear: bool = True) -> np.ndarray:
    """Dense Hermitian Hamiltonian at a fixed axial field.

    Args:
        system: Validated system parameters.
        field_T: Magnetic field along the easy axis, tesla.
        include_nuclear: If True, build on the product space (dimension
            ``(2J+1)(2I+1)``); otherwise the electronic space only.

    Returns:
        Complex Hermitian matrix in GHz.

    Raises:
        ValueError: On non-finite field or invalid parameters.
    """
    if not np.isfinite(field_T):
        raise ValueError(f"field must be finite, got {field_T}")
    system.validate()
    static, zeeman_op = _hamiltonian_parts(system, include_nuclear)
    return static + field_T * zeeman_op


def zeeman_diagram(system: SpinSystemParams, fields_T: np.ndarray,
                   include_nuclear: bool = True) -> ZeemanDiagram:
    """Eigenvalue traces over a field grid with continuity labels.

    Traces are continued from one field point to the next by greedy
    maximum-overlap matching of eigenvectors (tie-break on energy
    proximity).  If for some trace every overlap with the new eigenvectors
    falls below 0.5 the continuation is ambiguous and a
    :class:`LabelTrackingError` naming the field step is raised.

    Args:
        system: System parameters.
        fields_T: Strictly increasing field grid with at least two points.
        include_nuclear: Product space (True) or electronic-only (False).

    Returns:
        :class:`ZeemanDiagram` with one row per field point.
    """
    fields = np.asarray(fields_T, dtype=float)
    if fields.ndim != 1 or fields.size < 2:
        raise ValueError("field grid must be one-dimensional with >= 2 points")
    if np.any(np.diff(fields) <= 0):
        raise ValueError("field grid must be strictly increasing")

    static, zeeman_op = _hamiltonian_parts(system, include_nuclear)
    dim = static.shape[0]
    energies = np.empty((fields.size, dim))

    evals, evecs = np.linalg.eigh(static + fields[0] * zeeman_op)
    energies[0] = evals
    prev_vecs = evecs

    if include_nuclear:
        basis = product_basis_labels(system)
        labels = [basis[int(np.argmax(np.abs(evecs[:, k]) ** 2))] for k in range(dim)]
    else:
        mjs = projection_values(system.J)
        labels = [(float(mjs[int(np.argmax(np.abs(evecs[:, k]) ** 2))]), None)
                  for k in range(dim)]

    for i in range(1, fields.size):
        evals, evecs = np.linalg.eigh(static + fields[i] * zeeman_op)
        order = _match_traces(prev_vecs, evecs, energies[i - 1], evals, step_index=i)
        energies[i] = evals[order]
        prev_vecs = evecs[:, order]
    return ZeemanDiagram(fields_T=fields, energies_GHz=energies, labels=labels)


def _match_traces(prev_vecs: np.ndarray, new_vecs: np.ndarray,
                  prev_energies: np.ndarray, new_energies: np.ndarray,
                  step_index: int) -> np.ndarray:
    """Greedy overlap assignment of new eigenvectors to existing traces."""
    overlap2 = np.abs(prev_vecs.conj().T @ new_vecs) ** 2
    dim = overlap2.shape[0]
    order = np.full(dim, -1, dtype=int)
    taken = np.zeros(dim, dtype=bool)
    for trace in range(dim):
        row = np.where(taken, -1.0, overlap2[trace])
        best = float(row.max())
        if best < 0.5:
            raise LabelTrackingError(
                f"trace continuation ambiguous at field step {step_index}: "
                f"best overlap {best:.3f} < 0.5")
        # Tie-break near-equal overlaps on energy proximity.
        candidates = np.flatnonzero(row >= best * (1.0 - 1e-9))
        pick = candidates[int(np.argmin(np.abs(new_energies[candidates]
                                               - prev_energies[trace])))]
        order[trace] = pick
        taken[pick] = True
    return order


def analytic_crossing_field(system: SpinSystemParams, m_I: float) -> float:
    """Closed-form crossing field B* = -A m_I / (g_J mu_B/h), tesla."""
    return -system.hyperfine.A_GHz * m_I / (system.g_J * MU_B_GHZ_PER_T)


def _diabatic_energies(system: SpinSystemParams, field_T: float,
                       m_I: float) -> tuple[float, float, int, int]:
    """Energies of the (Jz=+J, m_I) and (Jz=-J, m_I) character eigenstates."""
    static, zeeman_op = _hamiltonian_parts(system, include_nuclear=True)
    evals, evecs = np.linalg.eigh(static + field_T * zeeman_op)
    dim_n = int(round(2 * system.I)) + 1
    i_nuc = int(round(system.I - m_I))
    idx_plus = 0 * dim_n + i_nuc
    idx_minus = (static.shape[0] // dim_n - 1) * dim_n + i_nuc
    k_plus = int(np.argmax(np.abs(evecs[idx_plus, :]) ** 2))
    k_minus = int(np.argmax(np.abs(evecs[idx_minus, :]) ** 2))
    return float(evals[k_plus]), float(evals[k_minus]), k_plus, k_minus


def find_avoided_crossings(system: SpinSystemParams,
                           window_T: tuple[float, float] = (-0.06, 0.06),
                           field_tol_T: float = 1e-6) -> list[CrossingInfo]:
    """Locate every nuclear-conserving ground-doublet crossing in a window.

    For each nuclear projection the analytic crossing field seeds a bisection
    on the diabatic branch-energy difference of the full Hamiltonian,
    converged to ``field_tol_T``; the gap is the minimum eigenvalue
    separation near the refined field and the branch slopes come from finite
    differences 2 mT away from it.

    Args:
        system: System parameters.
        window_T: Inclusive (min, max) field window in tesla.
        field_tol_T: Bisection convergence tolerance.

    Returns:
        Crossings sorted by field, one per nuclear projection whose crossing
        lies inside the window.
    """
    lo, hi = window_T
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ValueError(f"invalid field window {window_T}")
    system.validate()
    out: list[CrossingInfo] = []
    for m_i in projection_values(system.I):
        m_i = float(m_i)
        b_star = analytic_crossing_field(system, m_i)
        if not (lo <= b_star <= hi):
            continue
        b_lo, b_hi = b_star - 1e-3, b_star + 1e-3
        f_lo = _branch_diff(system, b_lo, m_i)
        f_hi = _branch_diff(system, b_hi, m_i)
        widen = 0
        while f_lo * f_hi > 0 and widen < 8:
            b_lo -= 1e-3
            b_hi += 1e-3
            f_lo = _branch_diff(system, b_lo, m_i)
            f_hi = _branch_diff(system, b_hi, m_i)
            widen += 1
        if f_lo * f_hi > 0:
            raise RuntimeError(f"no sign change bracketing the m_I={m_i} crossing")
        while b_hi - b_lo > field_tol_T:
            b_mid = 0.5 * (b_lo + b_hi)
            f_mid = _branch_diff(system, b_mid, m_i)
            if f_lo * f_mid <= 0:
                b_hi = b_mid
            else:
                b_lo, f_lo = b_mid, f_mid
        b_cross = 0.5 * (b_lo + b_hi)
        gap_hz = _minimum_gap_Hz(system, b_cross, m_i)
        db = 2e-3
        ep_hi, em_hi, _, _ = _diabatic_energies(system, b_cross + db, m_i)
        ep_lo, em_lo, _, _ = _diabatic_energies(system, b_cross - db, m_i)
        slope_plus = (ep_hi - ep_lo) / (2 * db) * 1e9
        slope_minus = (em_hi - em_lo) / (2 * db) * 1e9
        out.append(CrossingInfo(field_T=b_cross, m_I=m_i, gap_Hz=gap_hz,
                                branch_slopes_Hz_per_T=(slope_plus, slope_minus)))
    out.sort(key=lambda c: c.field_T)
    return out


def _branch_diff(system: SpinSystemParams, field_T: float, m_I: float) -> float:
    e_plus, e_minus, _, _ = _diabatic_energies(system, field_T, m_I)
    return e_plus - e_minus


def _minimum_gap_Hz(system: SpinSystemParams, b_cross: float, m_I: float) -> float:
    """Minimize the separation of the two crossing eigenvalues near b_cross."""
    static, zeeman_op = _hamiltonian_parts(system, include_nuclear=True)
    _, _, k_plus, k_minus = _diabatic_energies(system, b_cross + 5e-6, m_I)

    def separation(b: float) -> float:
        evals = np.linalg.eigvalsh(static + b * zeeman_op)
        return abs(evals[k_plus] - evals[k_minus])

    res = minimize_scalar(separation, bounds=(b_cross - 5e-6, b_cross + 5e-6),
                          method="bounded", options={"xatol": 1e-12})
    return float(res.fun) * 1e9


def fit_hyperfine_from_frequencies(nu01_GHz: float, nu12_GHz: float,
                                   nu23_GHz: float) -> HyperfineFit:
    """Least-squares hyperfine and quadrupole constants from three gaps.

    On the ``Jz = -J`` branch the effective nuclear levels are
    ``E(m_I) = -6 A m_I + P (m_I^2 - 5/4)``, so the adjacent gaps are
    ``{6A - 2P, 6A, 6A + 2P}`` in ascending order.  The linear model is
    solved by least squares; for a physical triple the residual vanishes.

    Args:
        nu01_GHz: Lowest transition frequency (levels 0-1), GHz.
        nu12_GHz: Middle transition frequency, GHz.
        nu23_GHz: Highest transition frequency, GHz.

    Returns:
        :class:`HyperfineFit` with A, P (GHz) and the residual norm.

    Raises:
        ValueError: If the frequencies are not strictly ascending positives.
    """
    nus = np.array([nu01_GHz, nu12_GHz, nu23_GHz], dtype=float)
    if np.any(~np.isfinite(nus)) or np.any(nus <= 0):
        raise ValueError(f"frequencies must be finite and positive, got {nus}")
    if not (nu01_GHz < nu12_GHz < nu23_GHz):
        raise ValueError("frequencies must satisfy nu01 < nu12 < nu23, got "
                         f"{nu01_GHz}, {nu12_GHz}, {nu23_GHz}")
    design = np.array([[6.0, -2.0], [6.0, 0.0], [6.0, 2.0]])
    coef, _, _, _ = np.linalg.lstsq(design, nus, rcond=None)
    residual = float(np.linalg.norm(design @ coef - nus))
    return HyperfineFit(A_GHz=float(coef[0]), P_GHz=float(coef[1]),
                        residual_GHz=residual)


def effective_qudit_levels(hyperfine: HyperfineParams, branch: float = -6.0,
                           nuclear_spin: float = 1.5) -> np.ndarray:
    """Nuclear level energies on a frozen electronic branch, qudit order.

    Args:
        hyperfine: A and P parameters.
        branch: Electronic projection Jz of the frozen branch (+6 or -6).
        nuclear_spin: Nuclear quantum number I.

    Returns:
        Energies ``A * branch * m_I + P * (m_I^2 - I(I+1)/3)`` in GHz for
        ``m_I`` in qudit level order (+3/2, +1/2, -1/2, -3/2 for I = 3/2).
        On the ``branch = -6`` convention the energies ascend with level
        index and the adjacent gaps are {6A - 2P, 6A, 6A + 2P}.
    """
    m_vals = projection_values(nuclear_spin)
    quad_offset = nuclear_spin * (nuclear_spin + 1.0) / 3.0
    return (hyperfine.A_GHz * branch * m_vals
            + hyperfine.P_GHz * (m_vals**2 - quad_offset))


def transition_frequencies(levels_GHz: np.ndarray) -> np.ndarray:
    """Adjacent-level gaps ``E[k+1] - E[k]`` of a level array."""
    levels = np.asarray(levels_GHz, dtype=float)
    return np.diff(levels)
