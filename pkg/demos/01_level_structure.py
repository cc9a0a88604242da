"""
Level structure of the molecular qudit
======================================

Builds the ligand-field Hamiltonian, derives the four nuclear levels
riding on the electronic ground doublet, and locates the avoided
crossings that make the nuclear state readable.
"""

import numpy as np

from tbqudit import (
    KB_GHZ_PER_K,
    build_hamiltonian,
    default_system,
    effective_qudit_levels,
    find_avoided_crossings,
    transition_frequencies,
)

system = default_system()

# Electronic structure at zero field: the ground doublet |Jz = +-6> sits
# far below the first excited doublet.
h = build_hamiltonian(system, field_T=0.0, include_nuclear=False)
energies = np.linalg.eigvalsh(h)
gap_K = (energies[2] - energies[0]) / KB_GHZ_PER_K
print(f"electronic gap above the ground doublet: {gap_K:.1f} K")

# Nuclear levels on the Jz = -6 branch, and the three addressable gaps.
levels = effective_qudit_levels(system.hyperfine)
print("qudit levels (GHz):", np.round(levels, 3))
nus = transition_frequencies(levels)
print("transition frequencies (GHz):", np.round(nus, 3))

# Each nuclear projection conserves itself through the doublet's level
# anticrossing, so four distinct crossing fields appear.
print()
print("avoided crossings of the ground doublet:")
for c in find_avoided_crossings(system, window_T=(-0.06, 0.06)):
    print(f"  m_I = {c.m_I:+.1f}: field {c.field_T * 1e3:+8.3f} mT, "
          f"gap {c.gap_Hz / 1e3:.2f} kHz")
