"""Excitation-number-resolved pure-state dynamics under the no-jump generator.

The joint state is decomposed into blocks of fixed total excitation number m.
The m = 1 block is solved either with the explicit line modes or in its
input-output reduction; the m = 2 block is the performance-critical kernel
(O(N^2) amplitudes) and dispatches to the compiled backend when available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ._kernels import BACKEND, make_two_exc_rhs, make_two_exc_rhs_numpy
from .fields import ControlField, ModeGrid, PhysicalParams, PulseEnvelope, TimeGrid

SQRT2 = math.sqrt(2.0)

# Coherent-pulse predictions truncated at two excitations degrade as O(n^3);
# beyond this photon number the neglected Poisson weight is no longer small.
LADDER_VALIDITY_CAP = 0.3

MAX_MODES_TWO_EXC = 1201


@dataclass
class SingleExcitationResult:
    c1: complex
    e1: complex
    r1: complex
    modes: np.ndarray | None      # final E_k, None for the input-output variant
    eta_1: float
    norm_final: float
    times: np.ndarray
    c1_t: np.ndarray
    e1_t: np.ndarray
    norm_t: np.ndarray


@dataclass
class TwoExcitationResult:
    c2: complex
    e2: complex
    r2: complex
    modes_c: np.ndarray
    modes_e: np.ndarray
    modes_r: np.ndarray
    pair_triangle: np.ndarray     # A_{k,k'} upper triangle, row-major
    eta_2: float
    norm_final: float
    times: np.ndarray
    norm_t: np.ndarray
    backend: str


@dataclass
class LadderResult:
    eta_1: float
    eta_2: float
    norm_1: float
    norm_2: float

    def eta(self, n: float) -> float:
        return coherent_efficiency_ladder(n, self.eta_1, self.eta_2)[0]

    def summary(self) -> dict:
        return {
            "eta_1": self.eta_1,
            "eta_2": self.eta_2,
            "norm_1": self.norm_1,
            "norm_2": self.norm_2,
        }


def ladder_initial_conditions(alphas: np.ndarray, n: float):
    """Unit-normalized block coefficients of the coherent-state expansion.

    Returns (E_k, E_{k,k'} upper triangle) with E_k = alpha_k / sqrt(n) and
    E_{k,k'} = E_k E_{k'} / sqrt(2).
    """
    if n <= 0:
        raise ValueError("block normalization undefined for n = 0")
    alphas = np.asarray(alphas, dtype=complex)
    e1 = alphas / math.sqrt(n)
    iu0, iu1 = np.triu_indices(alphas.size)
    pair = e1[iu0] * e1[iu1] / SQRT2
    return e1, pair


def _pair_norm_sq(tri: np.ndarray, N: int) -> float:
    """Squared norm carried by the symmetric pair amplitudes A_{k,k'}.

    Off-diagonal entries weigh 1, diagonal entries 1/2 (the ket |1_k 1_k>
    equals sqrt(2) |2_k>).
    """
    iu0, iu1 = np.triu_indices(N)
    w = np.where(iu0 == iu1, 0.5, 1.0)
    return float(np.sum(w * np.abs(tri) ** 2))


def _phase_to_t1(alphas: np.ndarray, modes: ModeGrid, t1: float) -> np.ndarray:
    """Free-evolve the mode amplitudes (defined at t = 0) back to t1."""
    return alphas * np.exp(-1j * modes.detunings * t1)


def integrate_single_excitation_io(params: PhysicalParams, env: PulseEnvelope,
                                   ctrl: ControlField, grid: TimeGrid,
                                   n_samples: int = 401) -> SingleExcitationResult:
    """Single-photon storage via the input-output reduction (3 amplitudes).

    The envelope is normalized to unit photon number internally, so eta_1 is
    the single-photon storage efficiency regardless of env's n.
    """
    if env.n <= 0:
        raise ValueError("envelope must have positive norm")
    scale = 1.0 / math.sqrt(env.n)
    drive = math.sqrt(2.0 * params.kappa)
    g, gamma = params.g, params.gamma
    Delta, delta = params.Delta, params.delta
    k_all = params.kappa + params.kappa_loss

    def rhs(t, y):
        c1, e1, r1 = y
        omega = complex(np.asarray(ctrl(t)).item())
        e_in = scale * complex(np.asarray(env(t)).item())
        return [
            -1j * g * e1 - 1j * drive * e_in - k_all * c1,
            (1j * Delta - gamma) * e1 - 1j * g * c1 - 1j * omega * r1,
            -1j * np.conj(omega) * e1 - 1j * delta * r1,
        ]

    t_eval = np.linspace(grid.t1, grid.t2, n_samples)
    sol = solve_ivp(rhs, (grid.t1, grid.t2), np.zeros(3, dtype=complex),
                    method="RK45", rtol=grid.rel_tol, atol=grid.abs_tol,
                    t_eval=t_eval)
    if not sol.success:
        raise RuntimeError(f"single-excitation integration failed: {sol.message}")
    c1, e1, r1 = sol.y[:, -1]
    norm_t = np.sum(np.abs(sol.y) ** 2, axis=0)
    return SingleExcitationResult(
        c1=c1, e1=e1, r1=r1, modes=None,
        eta_1=float(abs(r1) ** 2),
        norm_final=float(norm_t[-1]),
        times=sol.t, c1_t=sol.y[0], e1_t=sol.y[1], norm_t=norm_t,
    )


def integrate_single_excitation_modes(params: PhysicalParams, modes: ModeGrid,
                                      alphas: np.ndarray, ctrl: ControlField,
                                      grid: TimeGrid,
                                      n_samples: int = 401) -> SingleExcitationResult:
    """Single-photon storage with the N explicit line modes (N + 3 amplitudes)."""
    alphas = np.asarray(alphas, dtype=complex)
    n = float(np.sum(np.abs(alphas) ** 2))
    if n <= 0:
        raise ValueError("mode amplitudes must have positive norm")
    e_modes0 = _phase_to_t1(alphas, modes, grid.t1) / math.sqrt(n)

    det = modes.detunings
    lam = modes.lam
    g, gamma = params.g, params.gamma
    Delta, delta = params.Delta, params.delta
    k_loss = params.kappa_loss
    N = modes.N

    def rhs(t, y):
        c1, e1, r1 = y[0], y[1], y[2]
        ek = y[3:]
        omega = complex(np.asarray(ctrl(t)).item())
        dy = np.empty_like(y)
        dy[0] = -1j * g * e1 - 1j * lam * ek.sum() - k_loss * c1
        dy[1] = (1j * Delta - gamma) * e1 - 1j * g * c1 - 1j * omega * r1
        dy[2] = -1j * np.conj(omega) * e1 - 1j * delta * r1
        dy[3:] = -1j * det * ek - 1j * lam * c1
        return dy

    y0 = np.zeros(N + 3, dtype=complex)
    y0[3:] = e_modes0
    t_eval = np.linspace(grid.t1, grid.t2, n_samples)
    sol = solve_ivp(rhs, (grid.t1, grid.t2), y0, method="RK45",
                    rtol=grid.rel_tol, atol=grid.abs_tol, t_eval=t_eval)
    if not sol.success:
        raise RuntimeError(f"single-excitation integration failed: {sol.message}")
    yf = sol.y[:, -1]
    norm_t = np.sum(np.abs(sol.y) ** 2, axis=0)
    return SingleExcitationResult(
        c1=yf[0], e1=yf[1], r1=yf[2], modes=yf[3:],
        eta_1=float(abs(yf[2]) ** 2),
        norm_final=float(norm_t[-1]),
        times=sol.t, c1_t=sol.y[0], e1_t=sol.y[1], norm_t=norm_t,
    )


def integrate_two_excitation(params: PhysicalParams, modes: ModeGrid,
                             alphas: np.ndarray, ctrl: ControlField,
                             grid: TimeGrid, n_samples: int = 17,
                             backend: str = "auto") -> TwoExcitationResult:
    """Two-photon storage with explicit line modes (N^2 + 3N + 3 amplitudes).

    eta_2 counts the atom in |r> with the second photon either still in the
    cavity (|r2|^2) or back in the line (sum_k |Er_k|^2).
    """
    alphas = np.asarray(alphas, dtype=complex)
    N = modes.N
    if N > MAX_MODES_TWO_EXC:
        raise ValueError(
            f"N = {N} exceeds the two-excitation limit {MAX_MODES_TWO_EXC}; "
            f"use a coarser grid (e.g. N = {MAX_MODES_TWO_EXC // 2 * 2 - 1})"
        )
    n = float(np.sum(np.abs(alphas) ** 2))
    if n <= 0:
        raise ValueError("mode amplitudes must have positive norm")
    e1 = _phase_to_t1(alphas, modes, grid.t1) / math.sqrt(n)
    iu0, iu1 = np.triu_indices(N)
    # A(t1) = E_{k,k'} + E_{k',k} = sqrt(2) E_k E_k'
    tri0 = SQRT2 * e1[iu0] * e1[iu1]

    if backend == "auto":
        make, used = make_two_exc_rhs, BACKEND
    elif backend == "numpy":
        make, used = make_two_exc_rhs_numpy, "numpy"
    elif backend == "cython":
        if BACKEND != "cython":
            raise RuntimeError("compiled backend requested but not available")
        make, used = make_two_exc_rhs, "cython"
    else:
        raise ValueError(f"unknown backend {backend!r}")
    core = make(N, modes.detunings, modes.lam, params.g, params.Delta,
                params.delta, params.gamma, params.kappa_loss)

    def rhs(t, y):
        return core(y, complex(np.asarray(ctrl(t)).item()))

    size = 3 + 3 * N + N * (N + 1) // 2
    y0 = np.zeros(size, dtype=complex)
    y0[3 + 3 * N:] = tri0
    t_eval = np.linspace(grid.t1, grid.t2, n_samples)
    sol = solve_ivp(rhs, (grid.t1, grid.t2), y0, method="RK45",
                    rtol=grid.rel_tol, atol=grid.abs_tol, t_eval=t_eval)
    if not sol.success:
        raise RuntimeError(f"two-excitation integration failed: {sol.message}")

    norm_t = np.empty(sol.t.size)
    for i, col in enumerate(sol.y.T):
        head = float(np.sum(np.abs(col[:3 + 3 * N]) ** 2))
        norm_t[i] = head + _pair_norm_sq(col[3 + 3 * N:], N)
    yf = sol.y[:, -1]
    er = yf[3 + 2 * N:3 + 3 * N]
    eta_2 = float(abs(yf[2]) ** 2 + np.sum(np.abs(er) ** 2))
    return TwoExcitationResult(
        c2=yf[0], e2=yf[1], r2=yf[2],
        modes_c=yf[3:3 + N], modes_e=yf[3 + N:3 + 2 * N], modes_r=er,
        pair_triangle=yf[3 + 3 * N:],
        eta_2=eta_2,
        norm_final=float(norm_t[-1]),
        times=sol.t, norm_t=norm_t, backend=used,
    )


def coherent_efficiency_ladder(n: float, eta_1: float, eta_2: float):
    """Poisson-weighted efficiency of a coherent pulse, truncated at m = 2.

    eta = exp(-n) (n eta_1 + n^2/2 eta_2),  nu = eta / n.
    For n = 0 the fidelity is defined by its limit, eta_1.
    """
    if n < 0:
        raise ValueError("photon number n must be non-negative")
    if n == 0:
        return 0.0, eta_1
    eta = math.exp(-n) * (n * eta_1 + 0.5 * n**2 * eta_2)
    return eta, eta / n


def no_jump_probability(block_norms, n: float) -> float:
    """Probability of the zero-jump trajectory, truncated at two excitations.

    ``block_norms`` are the final squared norms of the m = 0, 1, 2 blocks.
    """
    if n < 0:
        raise ValueError("photon number n must be non-negative")
    block_norms = list(block_norms)
    weights = [math.exp(-n) * n**m / math.factorial(m) for m in range(len(block_norms))]
    return float(sum(w * b for w, b in zip(weights, block_norms)))


def solve_ladder(params: PhysicalParams, env: PulseEnvelope, modes: ModeGrid,
                 ctrl: ControlField, grid: TimeGrid,
                 backend: str = "auto") -> LadderResult:
    """Run both excitation blocks and collect eta_1, eta_2 and block norms."""
    from .fields import mode_amplitudes

    alphas = mode_amplitudes(env, modes, grid.t1, grid.t2)
    one = integrate_single_excitation_modes(params, modes, alphas, ctrl, grid)
    two = integrate_two_excitation(params, modes, alphas, ctrl, grid,
                                   backend=backend)
    return LadderResult(eta_1=one.eta_1, eta_2=two.eta_2,
                        norm_1=one.norm_final, norm_2=two.norm_final)
