"""Pure-NumPy right-hand side of the two-excitation block.

State layout (complex128 vector of length 3 + 3N + N(N+1)/2):

    y[0]            c2      |g, 2, vac>
    y[1]            e2      |e, 1, vac>
    y[2]            r2      |r, 1, vac>
    y[3 : 3+N]      Ec_k    |g, 1, 1_k>
    y[3+N : 3+2N]   Ee_k    |e, 0, 1_k>
    y[3+2N : 3+3N]  Er_k    |r, 0, 1_k>
    y[3+3N :]       A_{k,k'} upper triangle (row-major, diagonal included)
"""

from __future__ import annotations

import math

import numpy as np

SQRT2 = math.sqrt(2.0)


def make_rhs(N, detunings, lam, g, Delta, delta, gamma, kappa_loss):
    """Return rhs(y, omega) -> dy for the two-excitation amplitudes."""
    detunings = np.asarray(detunings, dtype=float)
    iu0, iu1 = np.triu_indices(N)
    det_pair = detunings[iu0] + detunings[iu1]
    full = np.zeros((N, N), dtype=complex)
    diag_idx = np.arange(N)

    def rhs(y, omega):
        c2, e2, r2 = y[0], y[1], y[2]
        ec = y[3:3 + N]
        ee = y[3 + N:3 + 2 * N]
        er = y[3 + 2 * N:3 + 3 * N]
        tri = y[3 + 3 * N:]

        full[iu0, iu1] = tri
        row_sum = full.sum(axis=1) + full.sum(axis=0) - full[diag_idx, diag_idx]

        dy = np.empty_like(y)
        dy[0] = -1j * SQRT2 * g * e2 - 1j * SQRT2 * lam * ec.sum() - 2.0 * kappa_loss * c2
        dy[1] = ((1j * Delta - gamma - kappa_loss) * e2 - 1j * SQRT2 * g * c2
                 - 1j * omega * r2 - 1j * lam * ee.sum())
        dy[2] = (-1j * np.conj(omega) * e2 - 1j * lam * er.sum()
                 - (kappa_loss + 1j * delta) * r2)
        dy[3:3 + N] = (-(1j * detunings + kappa_loss) * ec - 1j * g * ee
                       - 1j * lam * row_sum - 1j * SQRT2 * lam * c2)
        dy[3 + N:3 + 2 * N] = ((1j * (Delta - detunings) - gamma) * ee - 1j * g * ec
                               - 1j * omega * er - 1j * lam * e2)
        dy[3 + 2 * N:3 + 3 * N] = (-1j * (detunings + delta) * er
                                   - 1j * np.conj(omega) * ee - 1j * lam * r2)
        dy[3 + 3 * N:] = -1j * det_pair * tri - 1j * lam * (ec[iu0] + ec[iu1])
        return dy

    return rhs
