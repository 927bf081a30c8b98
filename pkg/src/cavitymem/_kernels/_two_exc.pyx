# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython right-hand side of the two-excitation block.

Same state layout as the NumPy fallback in two_exc_np.py.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double SQRT2 = 2.0 ** 0.5


def make_rhs(int N, detunings, double lam, double g, double Delta,
             double delta, double gamma, double kappa_loss):
    """Return rhs(y, omega) -> dy for the two-excitation amplitudes."""
    det = np.ascontiguousarray(detunings, dtype=np.float64)
    if det.shape[0] != N:
        raise ValueError("detunings length must equal N")

    def rhs(y, omega):
        dy = np.empty_like(y)
        _rhs(y, dy, N, det, lam, g, Delta, delta, gamma, kappa_loss, omega)
        return dy

    return rhs


cdef void _rhs(double complex[::1] y, double complex[::1] dy, int N,
               double[::1] det, double lam, double g, double Delta,
               double delta, double gamma, double kappa_loss,
               double complex omega) noexcept:
    cdef int i, j, idx
    cdef double complex c2 = y[0]
    cdef double complex e2 = y[1]
    cdef double complex r2 = y[2]
    cdef double complex sum_ec = 0, sum_ee = 0, sum_er = 0
    cdef double complex aij
    cdef double complex I = 1j
    cdef double complex omega_c = omega.conjugate()

    cdef double complex[::1] row_sum = np.zeros(N, dtype=np.complex128)

    # row sums of the symmetric A matrix from its upper triangle
    idx = 3 + 3 * N
    for i in range(N):
        for j in range(i, N):
            aij = y[idx]
            row_sum[i] = row_sum[i] + aij
            if j != i:
                row_sum[j] = row_sum[j] + aij
            idx += 1

    for i in range(N):
        sum_ec += y[3 + i]
        sum_ee += y[3 + N + i]
        sum_er += y[3 + 2 * N + i]

    dy[0] = -I * SQRT2 * g * e2 - I * SQRT2 * lam * sum_ec - 2.0 * kappa_loss * c2
    dy[1] = ((I * Delta - gamma - kappa_loss) * e2 - I * SQRT2 * g * c2
             - I * omega * r2 - I * lam * sum_ee)
    dy[2] = -I * omega_c * e2 - I * lam * sum_er - (kappa_loss + I * delta) * r2

    for i in range(N):
        dy[3 + i] = (-(I * det[i] + kappa_loss) * y[3 + i] - I * g * y[3 + N + i]
                     - I * lam * row_sum[i] - I * SQRT2 * lam * c2)
        dy[3 + N + i] = ((I * (Delta - det[i]) - gamma) * y[3 + N + i]
                         - I * g * y[3 + i] - I * omega * y[3 + 2 * N + i]
                         - I * lam * e2)
        dy[3 + 2 * N + i] = (-I * (det[i] + delta) * y[3 + 2 * N + i]
                             - I * omega_c * y[3 + N + i] - I * lam * r2)

    idx = 3 + 3 * N
    for i in range(N):
        for j in range(i, N):
            dy[idx] = (-I * (det[i] + det[j]) * y[idx]
                       - I * lam * (y[3 + i] + y[3 + j]))
            idx += 1
