"""Integration of the displaced-frame master equation over the pulse window."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .fields import ControlField, PhysicalParams, PulseEnvelope, TimeGrid, envelope_norm
from .operators import E, G, HilbertSpace, R, XI

POSITIVITY_FLOOR = -1e-7
TRACE_TOL = 1e-6
CONVERGENCE_TOL = 1e-4


@dataclass
class MasterRunResult:
    rho_final: np.ndarray
    eta: float
    nu: float
    max_photons: float
    trace_defect: float
    herm_defect: float
    min_eigenvalue: float
    m_max: int
    n_impinging: float

    def summary(self) -> dict:
        """JSON-compatible structured summary of the run."""
        return {
            "eta": self.eta,
            "nu": self.nu,
            "max_photons": self.max_photons,
            "trace_defect": self.trace_defect,
            "herm_defect": self.herm_defect,
            "min_eigenvalue": self.min_eigenvalue,
            "m_max": self.m_max,
            "n_impinging": self.n_impinging,
        }


def storage_efficiency(rho: np.ndarray, space: HilbertSpace) -> float:
    """eta = sum_m <r, m| rho |r, m> (population of |r>, cavity traced out)."""
    idx = [space.index(R, m) for m in range(space.n_fock)]
    return float(np.real(np.sum(rho[idx, idx])))


def intracavity_photons(rho: np.ndarray, space: HilbertSpace) -> float:
    """Tr(rho a^dag a)."""
    diag = np.real(np.diag(rho)).reshape(4, space.n_fock)
    return float(np.sum(diag * np.arange(space.n_fock)))


def _rhs_factory(params: PhysicalParams, space: HilbertSpace,
                 env: PulseEnvelope, ctrl: ControlField):
    """Precompute the time-independent operators of the master equation."""
    d = space.dim
    a = space.annihilator().astype(complex)
    ad = a.conj().T
    n_op = ad @ a
    s = space.atom_transition(XI, E).astype(complex)
    sd = s.conj().T
    pe = space.atom_projector(E).astype(complex)
    h_static = (
        params.delta * space.atom_projector(R).astype(complex)
        - params.Delta * pe
    )
    seg = params.g * space.atom_transition(E, G).astype(complex) @ a
    h_static += seg + seg.conj().T
    h_er = space.atom_transition(E, R).astype(complex)
    h_re = h_er.conj().T
    drive_amp = np.sqrt(2.0 * params.kappa)
    gamma, ktot = params.gamma, params.kappa_tot

    def rhs(t, y):
        rho = y.reshape(d, d)
        omega = complex(np.asarray(ctrl(t)).item())
        e_in = complex(np.asarray(env(t)).item())
        H = h_static + omega * h_er + np.conj(omega) * h_re
        H = H + drive_amp * (e_in * ad + np.conj(e_in) * a)
        out = -1j * (H @ rho - rho @ H)
        out += gamma * (2.0 * s @ rho @ sd - pe @ rho - rho @ pe)
        out += ktot * (2.0 * a @ rho @ ad - n_op @ rho - rho @ n_op)
        return out.ravel()

    return rhs


def integrate_master(params: PhysicalParams, env: PulseEnvelope,
                     ctrl: ControlField, grid: TimeGrid,
                     m_max: int = 14, n_diag: int = 121) -> MasterRunResult:
    """Integrate the master equation from |g, 0><g, 0| and extract eta, nu.

    Diagnostics (trace defect, Hermiticity defect, smallest eigenvalue,
    intracavity photon number) are sampled at ``n_diag`` points along the
    trajectory.  A positivity violation beyond the floor aborts the run.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    space = HilbertSpace(m_max)
    d = space.dim
    rho0 = np.zeros((d, d), dtype=complex)
    i0 = space.index(G, 0)
    rho0[i0, i0] = 1.0

    rhs = _rhs_factory(params, space, env, ctrl)
    t_eval = np.linspace(grid.t1, grid.t2, n_diag)
    sol = solve_ivp(
        rhs, (grid.t1, grid.t2), rho0.ravel(),
        method="RK45", rtol=grid.rel_tol, atol=grid.abs_tol, t_eval=t_eval,
    )
    if not sol.success:
        raise RuntimeError(f"master-equation integration failed: {sol.message}")

    trace_defect = 0.0
    herm_defect = 0.0
    min_eig = np.inf
    max_photons = 0.0
    for col in sol.y.T:
        rho = col.reshape(d, d)
        trace_defect = max(trace_defect, abs(np.real(np.trace(rho)) - 1.0))
        herm_defect = max(herm_defect, float(np.max(np.abs(rho - rho.conj().T))))
        w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        min_eig = min(min_eig, float(w[0]))
        max_photons = max(max_photons, intracavity_photons(rho, space))
    if min_eig < POSITIVITY_FLOOR:
        raise RuntimeError(
            f"positivity violated: smallest eigenvalue {min_eig:.3e} "
            f"below floor {POSITIVITY_FLOOR:.1e}"
        )
    if max_photons > m_max - 3:
        warnings.warn(
            f"intracavity photon number {max_photons:.2f} close to the "
            f"truncation m_max={m_max}; result may not be converged",
            stacklevel=2,
        )

    rho_final = sol.y[:, -1].reshape(d, d)
    eta = storage_efficiency(rho_final, space)
    n_imp = envelope_norm(env, grid.t1, grid.t2)
    nu = eta / n_imp if n_imp > 0 else 0.0
    return MasterRunResult(
        rho_final=rho_final,
        eta=eta,
        nu=nu,
        max_photons=max_photons,
        trace_defect=trace_defect,
        herm_defect=herm_defect,
        min_eigenvalue=min_eig,
        m_max=m_max,
        n_impinging=n_imp,
    )


def truncation_scan(params: PhysicalParams, env: PulseEnvelope,
                    ctrl: ControlField, grid: TimeGrid,
                    m_list) -> list[dict]:
    """eta versus cavity truncation; flags convergence of successive values.

    A row is converged when its eta differs from the previous row's by less
    than 1e-4 absolute.
    """
    m_list = list(m_list)
    if m_list != sorted(m_list):
        raise ValueError("m_list must be ascending")
    rows = []
    prev = None
    for m in m_list:
        res = integrate_master(params, env, ctrl, grid, m_max=m)
        converged = prev is not None and abs(res.eta - prev) < CONVERGENCE_TOL
        rows.append({"m_max": m, "eta": res.eta, "converged": converged})
        prev = res.eta
    return rows
