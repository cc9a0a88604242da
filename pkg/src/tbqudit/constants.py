"""Physical constants and fixed conventions.

All energies in this package are expressed as frequencies (E/h) in GHz,
magnetic fields in tesla, and times in seconds.  The two conversion
constants below are fixed by convention and must not be overridden through
configuration; everything else (g-factors, coupling constants, ligand-field
coefficients) lives in :mod:`tbqudit.params`.
"""

from __future__ import annotations

# Bohr magneton over Planck constant, GHz per tesla.
MU_B_GHZ_PER_T = 13.996245

# Boltzmann constant over Planck constant, GHz per kelvin.
KB_GHZ_PER_K = 20.836612

# Nuclear spin of the I = 3/2 qudit and its dimension.
NUCLEAR_SPIN = 1.5
QUDIT_DIM = 4

# Electronic angular momentum of the ground multiplet and its dimension.
ELECTRONIC_J = 6.0
ELECTRONIC_DIM = 13

# Nuclear projections in qudit level order: level 0 is m_I = +3/2.
QUDIT_M_I = (1.5, 0.5, -0.5, -1.5)

# Human-readable labels matching QUDIT_M_I, used in tables and reports.
QUDIT_LABELS = ("+3/2", "+1/2", "-1/2", "-3/2")


def lande_g_factor(spin: float, orbital: float, total: float) -> float:
    """Lande g-factor for a ``|S, L, J>`` term.

    Args:
        spin: Spin quantum number S.
        orbital: Orbital quantum number L.
        total: Total angular momentum J.

    Returns:
        g = 1 + [J(J+1) + S(S+1) - L(L+1)] / [2 J(J+1)].
    """
    jj = total * (total + 1.0)
    return 1.0 + (jj + spin * (spin + 1.0) - orbital * (orbital + 1.0)) / (2.0 * jj)
