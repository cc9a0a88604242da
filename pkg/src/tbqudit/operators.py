"""Angular momentum and Stevens operator construction.

Matrices are built in the ``|j, m>`` basis ordered by descending projection,
``m = j, j-1, ..., -j``, so index 0 is the maximal projection.  All operators
are dense complex numpy arrays.

The extended Stevens operators implemented here are the five that appear in
the tetragonal ligand-field expansion used by the Hamiltonian module:
``O20``, ``O40``, ``O44``, ``O60`` and ``O64``.  With ``X = j(j+1)``:

    O20 = 3 Jz^2 - X
    O40 = 35 Jz^4 - (30 X - 25) Jz^2 + 3 X^2 - 6 X
    O44 = (J+^4 + J-^4) / 2
    O60 = 231 Jz^6 - (315 X - 735) Jz^4 + (105 X^2 - 525 X + 294) Jz^2
          - 5 X^3 + 40 X^2 - 60 X
    O64 = [(J+^4 + J-^4)(11 Jz^2 - X - 38) + h.c.] / 4

Every operator is Hermitian and, because the rank-4 terms only connect states
with ``delta m = +-4``, each commutes with the four-fold rotation
``exp(-i (pi/2) Jz)``.
"""

from __future__ import annotations

import numpy as np

_SUPPORTED_KQ = {(2, 0), (4, 0), (4, 4), (6, 0), (6, 4)}


def projection_values(j: float) -> np.ndarray:
    """Projections m = j ... -j in basis order (descending)."""
    dim = int(round(2 * j)) + 1
    return j - np.arange(dim)


def angular_momentum_ops(j: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Spin operators for quantum number ``j``.

    Args:
        j: Half-integer or integer angular momentum quantum number, > 0.

    Returns:
        Tuple ``(Jx, Jy, Jz, Jplus, Jminus)`` of complex matrices of
        dimension ``2j + 1`` in the descending-m basis, satisfying
        ``Jplus |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>``.

    Raises:
        ValueError: If ``j`` is not a positive multiple of 1/2.
    """
    if j <= 0 or abs(2 * j - round(2 * j)) > 1e-12:
        raise ValueError(f"j must be a positive integer or half-integer, got {j}")
    dim = int(round(2 * j)) + 1
    ms = projection_values(j)
    jz = np.diag(ms).astype(complex)
    jplus = np.zeros((dim, dim), dtype=complex)
    for col in range(1, dim):
        m = ms[col]
        # |j, m> (index col) is raised to |j, m+1> (index col - 1).
        jplus[col - 1, col] = np.sqrt(j * (j + 1) - m * (m + 1))
    jminus = jplus.conj().T
    jx = 0.5 * (jplus + jminus)
    jy = -0.5j * (jplus - jminus)
    return jx, jy, jz, jplus, jminus


def stevens_operator(k: int, q: int, j: float) -> np.ndarray:
    """Extended Stevens operator ``Okq`` for quantum number ``j``.

    Only the five ``(k, q)`` pairs used in the tetragonal expansion are
    supported; any other pair raises.

    Args:
        k: Rank, one of 2, 4, 6.
        q: Component, 0 or 4.
        j: Angular momentum quantum number.

    Returns:
        Dense Hermitian matrix of dimension ``2j + 1``.

    Raises:
        ValueError: For unsupported ``(k, q)`` or invalid ``j``.
    """
    if (k, q) not in _SUPPORTED_KQ:
        raise ValueError(f"unsupported Stevens operator (k={k}, q={q}); "
                         f"supported: {sorted(_SUPPORTED_KQ)}")
    _, _, jz, jplus, jminus = angular_momentum_ops(j)
    dim = jz.shape[0]
    eye = np.eye(dim, dtype=complex)
    x = j * (j + 1)
    jz2 = jz @ jz
    if (k, q) == (2, 0):
        return 3 * jz2 - x * eye
    if (k, q) == (4, 0):
        jz4 = jz2 @ jz2
        return 35 * jz4 - (30 * x - 25) * jz2 + (3 * x**2 - 6 * x) * eye
    sum4 = np.linalg.matrix_power(jplus, 4) + np.linalg.matrix_power(jminus, 4)
    if (k, q) == (4, 4):
        return 0.5 * sum4
    if (k, q) == (6, 0):
        jz4 = jz2 @ jz2
        jz6 = jz4 @ jz2
        return (231 * jz6 - (315 * x - 735) * jz4
                + (105 * x**2 - 525 * x + 294) * jz2
                - (5 * x**3 - 40 * x**2 + 60 * x) * eye)
    # (6, 4)
    inner = 11 * jz2 - (x + 38) * eye
    return 0.25 * (sum4 @ inner + inner @ sum4)
