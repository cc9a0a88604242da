"""Parameter containers for the molecular spin system.

Ligand-field coefficients are energies as frequencies (GHz) multiplying the
Stevens operators; the dimensionless reduction factors ``alpha``, ``beta``,
``gamma`` multiply the rank-2, rank-4 and rank-6 terms respectively.  The
shipped defaults describe a Tb(III) double-decker molecule: a ground
``|J = 6, Jz = +-6>`` doublet roughly 600 K below the first excited state,
an I = 3/2 nucleus with A_hf ~ 0.52 GHz hyperfine coupling and ~0.34 GHz
quadrupole parameter, and a ~1 uK tunnel splitting at the level crossings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constants import ELECTRONIC_J, NUCLEAR_SPIN, lande_g_factor


@dataclass(frozen=True)
class LigandFieldParams:
    """Tetragonal ligand-field expansion coefficients.

    The Hamiltonian term is
    ``alpha*B20*O20 + beta*(B40*O40 + B44*O44) + gamma*(B60*O60 + B64*O64)``.
    All B coefficients in GHz.
    """

    B20_GHz: float
    B40_GHz: float
    B44_GHz: float
    B60_GHz: float
    B64_GHz: float
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class HyperfineParams:
    """Nuclear-coupling parameters.

    Attributes:
        A_GHz: Hyperfine constant (GHz per unit of J.I).
        P_GHz: Axial quadrupole parameter (GHz), term P*(Iz^2 - I(I+1)/3).
        tunnel_splitting_Hz: Avoided-crossing gap delta_nu between the
            ``Jz = +-6`` branches, in Hz.  Enters the Hamiltonian as a
            phenomenological coupling (delta_nu/2)(|+6><-6| + h.c.) since the
            transverse ligand-field terms alone produce gaps far below the
            observable scale.
    """

    A_GHz: float
    P_GHz: float
    tunnel_splitting_Hz: float = 0.0


def tb_ligand_field() -> LigandFieldParams:
    """Shipped placeholder ligand-field set.

    Magnitudes follow published fits for the Tb(III) double-decker family,
    scaled so the ground-doublet to first-excited gap lands at ~600 K
    (~1.25e4 GHz).  Stevens reduction factors are the exact Tb(III) values
    alpha = -1/99, beta = 2/16335, gamma = -1/891891.
    """
    return LigandFieldParams(
        B20_GHz=11880.0,
        B40_GHz=-6540.0,
        B44_GHz=30.0,
        B60_GHz=948.0,
        B64_GHz=30.0,
        alpha=-1.0 / 99.0,
        beta=2.0 / 16335.0,
        gamma=-1.0 / 891891.0,
    )


def tb_hyperfine() -> HyperfineParams:
    """Hyperfine defaults fitted from the measured qudit gaps.

    A and P come from the least-squares fit of the transition frequencies
    (2.45, 3.13, 3.81) GHz; the tunnel splitting is 1 uK times k_B/h.
    """
    return HyperfineParams(
        A_GHz=0.5216666666666667,
        P_GHz=0.34,
        tunnel_splitting_Hz=20836.612,
    )


@dataclass(frozen=True)
class SpinSystemParams:
    """Complete static description of the coupled electronic-nuclear system."""

    J: float = ELECTRONIC_J
    I: float = NUCLEAR_SPIN
    g_J: float = lande_g_factor(spin=3.0, orbital=3.0, total=6.0)
    ligand: LigandFieldParams = field(default_factory=tb_ligand_field)
    hyperfine: HyperfineParams = field(default_factory=tb_hyperfine)

    def validate(self) -> None:
        if self.J <= 0 or abs(2 * self.J - round(2 * self.J)) > 1e-12:
            raise ValueError(f"J must be a positive half-integer, got {self.J}")
        if self.I <= 0 or abs(2 * self.I - round(2 * self.I)) > 1e-12:
            raise ValueError(f"I must be a positive half-integer, got {self.I}")
        if self.g_J <= 0:
            raise ValueError(f"g_J must be positive, got {self.g_J}")
        if self.hyperfine.tunnel_splitting_Hz < 0:
            raise ValueError("tunnel splitting must be >= 0, got "
                             f"{self.hyperfine.tunnel_splitting_Hz}")


def default_system() -> SpinSystemParams:
    """System with the shipped Tb(III) double-decker defaults."""
    return SpinSystemParams()
