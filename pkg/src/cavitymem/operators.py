"""Truncated atom (x) cavity Hilbert space and master-equation generators.

The atom has four levels: the Lambda triple |g>, |e>, |r| plus the terminal
sink |xi_e> that collects spontaneous decay from |e>.  The cavity mode is
truncated at ``m_max`` photons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fields import ControlField, ModeGrid, PhysicalParams, PulseEnvelope

ATOM_LEVELS = ("g", "e", "r", "xi_e")
G, E, R, XI = range(4)


@dataclass(frozen=True)
class HilbertSpace:
    """Atom (4 levels) tensor cavity Fock space 0..m_max."""

    m_max: int

    def __post_init__(self):
        if self.m_max < 1:
            raise ValueError("m_max must be at least 1")

    @property
    def n_fock(self) -> int:
        return self.m_max + 1

    @property
    def dim(self) -> int:
        return 4 * self.n_fock

    def index(self, atom: int, fock: int) -> int:
        if not 0 <= atom < 4:
            raise ValueError("atom level out of range")
        if not 0 <= fock <= self.m_max:
            raise ValueError("Fock level out of range")
        return atom * self.n_fock + fock

    def annihilator(self) -> np.ndarray:
        """Cavity annihilation operator on the full space."""
        a = np.diag(np.sqrt(np.arange(1, self.n_fock)), k=1)
        return np.kron(np.eye(4), a)

    def atom_projector(self, atom: int) -> np.ndarray:
        p = np.zeros((4, 4))
        p[atom, atom] = 1.0
        return np.kron(p, np.eye(self.n_fock))

    def atom_transition(self, upper: int, lower: int) -> np.ndarray:
        """|upper><lower| on the atom, identity on the cavity."""
        s = np.zeros((4, 4))
        s[upper, lower] = 1.0
        return np.kron(s, np.eye(self.n_fock))


def build_hamiltonian(params: PhysicalParams, space: HilbertSpace,
                      env: PulseEnvelope, ctrl: ControlField,
                      t: float) -> np.ndarray:
    """Displaced-frame Hamiltonian H'(t) on the truncated space.

    H'(t) = delta |r><r| - Delta |e><e|
            + (g |e><g| a + Omega(t) |e><r| + h.c.)
            + sqrt(2 kappa) (E_in(t) a^dag + E_in^*(t) a)
    """
    a = space.annihilator()
    H = params.delta * space.atom_projector(R).astype(complex)
    H -= params.Delta * space.atom_projector(E)
    seg = params.g * space.atom_transition(E, G) @ a
    H += seg + seg.conj().T
    omega = complex(np.asarray(ctrl(t)).item())
    ser = omega * space.atom_transition(E, R)
    H += ser + ser.conj().T
    e_in = complex(np.asarray(env(t)).item())
    drive = np.sqrt(2.0 * params.kappa) * e_in * a.conj().T
    H += drive + drive.conj().T
    return H


def lindblad_rhs(params: PhysicalParams, space: HilbertSpace,
                 H: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the displaced-frame master equation.

    d rho/dt = -i [H, rho]
               + gamma (2 s rho s^dag - |e><e| rho - rho |e><e|),  s = |xi_e><e|
               + kappa_tot (2 a rho a^dag - a^dag a rho - rho a^dag a)
    """
    if H.shape != rho.shape or H.shape != (space.dim, space.dim):
        raise ValueError("dimension mismatch between H, rho and the space")
    a = space.annihilator()
    s = space.atom_transition(XI, E)
    pe = space.atom_projector(E)
    n_op = a.conj().T @ a
    out = -1j * (H @ rho - rho @ H)
    out += params.gamma * (2.0 * s @ rho @ s.conj().T - pe @ rho - rho @ pe)
    out += params.kappa_tot * (
        2.0 * a @ rho @ a.conj().T - n_op @ rho - rho @ n_op
    )
    return out


# ---------------------------------------------------------------------------
# Effective Hamiltonian on the joint atom (x) cavity (x) line-modes space
# ---------------------------------------------------------------------------

def _mode_operators(n_modes: int, cutoff: int):
    """Sparse annihilation operators of each line mode on the joint mode space."""
    d = cutoff + 1
    b = sp.diags(np.sqrt(np.arange(1, d)), 1, format="csr")
    eye = sp.identity(d, format="csr")
    ops = []
    for i in range(n_modes):
        factors = [b if j == i else eye for j in range(n_modes)]
        op = factors[0]
        for f in factors[1:]:
            op = sp.kron(op, f, format="csr")
        ops.append(op)
    return ops


def _joint_dim(space: HilbertSpace, modes: ModeGrid, mode_cutoff: int) -> int:
    return 4 * space.n_fock * (mode_cutoff + 1) ** modes.N


def total_excitation_operator(space: HilbertSpace, modes: ModeGrid,
                              mode_cutoff: int = 2) -> sp.csr_matrix:
    """sum_k b_k^dag b_k + a^dag a + |e><e| + |r><r| on the joint space."""
    mdim = (mode_cutoff + 1) ** modes.N
    eye_m = sp.identity(mdim, format="csr")
    atom_cav = sp.csr_matrix(
        space.annihilator().conj().T @ space.annihilator()
        + space.atom_projector(E) + space.atom_projector(R)
    )
    out = sp.kron(atom_cav, eye_m, format="csr")
    eye_ac = sp.identity(space.dim, format="csr")
    for b in _mode_operators(modes.N, mode_cutoff):
        out = out + sp.kron(eye_ac, (b.conj().T @ b), format="csr")
    return out.tocsr()


def build_effective_hamiltonian(params: PhysicalParams, space: HilbertSpace,
                                ctrl: ControlField, modes: ModeGrid, t: float,
                                mode_cutoff: int = 2,
                                max_dim: int = 20000) -> sp.csr_matrix:
    """Non-Hermitian generator of the no-jump dynamics on the joint space.

    H_eff(t) = H_fields + H_I(t) - i gamma |e><e| - i kappa_loss a^dag a,
    with the explicit beam-splitter couplings lambda to every line mode.
    Intended for validation at small mode number only: the joint dimension
    4 (m_max+1) (mode_cutoff+1)^N must not exceed ``max_dim``.
    """
    dim = _joint_dim(space, modes, mode_cutoff)
    if dim > max_dim:
        raise ValueError(
            f"joint space dimension {dim} exceeds limit {max_dim}; "
            "reduce N, m_max or mode_cutoff"
        )
    mdim = (mode_cutoff + 1) ** modes.N
    eye_m = sp.identity(mdim, format="csr")
    eye_ac = sp.identity(space.dim, format="csr")

    a = sp.csr_matrix(space.annihilator().astype(complex))
    omega = complex(np.asarray(ctrl(t)).item())
    h_atom = (
        params.delta * sp.csr_matrix(space.atom_projector(R).astype(complex))
        - params.Delta * sp.csr_matrix(space.atom_projector(E))
        + params.g * sp.csr_matrix(space.atom_transition(E, G)) @ a
        + omega * sp.csr_matrix(space.atom_transition(E, R))
    )
    h_ac = h_atom + h_atom.conj().T
    H = sp.kron(h_ac, eye_m, format="csr")

    b_ops = _mode_operators(modes.N, mode_cutoff)
    for det, b in zip(modes.detunings, b_ops):
        nb = (b.conj().T @ b).astype(complex)
        H = H + det * sp.kron(eye_ac, nb, format="csr")
        coup = modes.lam * sp.kron(a.conj().T, b, format="csr")
        H = H + coup + coup.conj().T

    H = H - 1j * params.gamma * sp.kron(
        sp.csr_matrix(space.atom_projector(E).astype(complex)), eye_m, format="csr"
    )
    H = H - 1j * params.kappa_loss * sp.kron(
        (a.conj().T @ a), eye_m, format="csr"
    )
    return H.tocsr()
