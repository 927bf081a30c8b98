import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import cavitymem as cm
from cavitymem.fields import ConstantControl
from cavitymem.operators import (E, G, R, XI, HilbertSpace, build_effective_hamiltonian,
                                 build_hamiltonian, lindblad_rhs,
                                 total_excitation_operator)


@pytest.fixture(scope="module")
def space():
    return HilbertSpace(m_max=3)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return m + m.conj().T


class TestHilbertSpace:
    def test_dimensions(self, space):
        assert space.n_fock == 4
        assert space.dim == 16

    def test_index_is_bijection(self, space):
        seen = {space.index(a, m) for a in range(4) for m in range(space.n_fock)}
        assert seen == set(range(space.dim))

    def test_index_bounds(self, space):
        with pytest.raises(ValueError):
            space.index(4, 0)
        with pytest.raises(ValueError):
            space.index(0, space.m_max + 1)

    def test_m_max_validation(self):
        with pytest.raises(ValueError):
            HilbertSpace(m_max=0)

    def test_annihilator_ladder(self, space):
        a = space.annihilator()
        for atom in range(4):
            for m in range(1, space.n_fock):
                col = np.zeros(space.dim)
                col[space.index(atom, m)] = 1.0
                out = a @ col
                assert out[space.index(atom, m - 1)] == pytest.approx(math.sqrt(m))
                assert np.count_nonzero(out) == 1


class TestHamiltonian:
    def test_g_coupling_only(self, space, params):
        env = cm.sech_envelope(0.0, 1.0)
        H = build_hamiltonian(params, space, env, ConstantControl(0.0), 0.0)
        p0 = cm.PhysicalParams(g=params.g, kappa=params.kappa, gamma=params.gamma)
        H0 = build_hamiltonian(p0, space, env, ConstantControl(0.0), 0.0)
        assert H0[space.index(E, 0), space.index(G, 1)] == pytest.approx(params.g)
        np.testing.assert_allclose(H, H0)  # reference detunings are zero anyway

    def test_drive_matrix_element(self, space, params, T, ctrl):
        env = cm.sech_envelope(1.0, T)
        H = build_hamiltonian(params, space, env, ctrl, 0.2)
        e_in = complex(env(0.2))
        for m in range(space.m_max):
            got = H[space.index(G, m + 1), space.index(G, m)]
            assert got == pytest.approx(
                math.sqrt(2 * params.kappa) * e_in * math.sqrt(m + 1))

    def test_hermitian_by_construction(self, space, params, T, ctrl):
        env = cm.sech_envelope(1.0, T)
        for t in (-1.7, 0.0, 0.9):
            H = build_hamiltonian(params, space, env, ctrl, t)
            assert np.max(np.abs(H - H.conj().T)) == 0.0

    def test_sink_level_uncoupled(self, space, params, T, ctrl):
        env = cm.sech_envelope(1.0, T)
        H = build_hamiltonian(params, space, env, ctrl, 0.0)
        for m in range(space.n_fock):
            row = np.array(H[space.index(XI, m)])
            row[space.index(XI, m)] = 0.0  # diagonal allowed, none expected
            # the sink couples to nothing except via the cavity drive
            nz = np.nonzero(np.abs(row) > 1e-14)[0]
            assert all(idx // space.n_fock == XI for idx in nz)


class TestLindblad:
    def test_vacuum_is_dark(self, space, params):
        env = cm.sech_envelope(0.0, 1.0)
        H = build_hamiltonian(params, space, env, ConstantControl(0.0), 0.0)
        rho = np.zeros((space.dim, space.dim), dtype=complex)
        rho[space.index(G, 0), space.index(G, 0)] = 1.0
        out = lindblad_rhs(params, space, H, rho)
        assert np.max(np.abs(out)) < 1e-14

    def test_excited_state_decay_rates(self, space, params):
        rho = np.zeros((space.dim, space.dim), dtype=complex)
        rho[space.index(E, 0), space.index(E, 0)] = 1.0
        out = lindblad_rhs(params, space, np.zeros_like(rho), rho)
        assert out[space.index(E, 0), space.index(E, 0)].real == pytest.approx(
            -2 * params.gamma)
        assert out[space.index(XI, 0), space.index(XI, 0)].real == pytest.approx(
            2 * params.gamma)

    def test_cavity_decay_rate(self, space, params):
        rho = np.zeros((space.dim, space.dim), dtype=complex)
        rho[space.index(G, 1), space.index(G, 1)] = 1.0
        out = lindblad_rhs(params, space, np.zeros_like(rho), rho)
        n_op = space.annihilator().conj().T @ space.annihilator()
        assert np.trace(n_op @ out).real == pytest.approx(-2 * params.kappa_tot)

    def test_dimension_mismatch(self, space, params):
        with pytest.raises(ValueError):
            lindblad_rhs(params, space, np.zeros((4, 4)), np.zeros((4, 4)))

    @given(seed=st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_trace_free_and_hermiticity_preserving(self, seed, space, params):
        rho = random_hermitian(space.dim, seed)
        H = random_hermitian(space.dim, seed + 1)
        out = lindblad_rhs(params, space, H, rho)
        scale = np.max(np.abs(rho))
        assert abs(np.trace(out)) < 1e-12 * space.dim * scale
        assert np.max(np.abs(out - out.conj().T)) < 1e-12 * scale * 100

    @given(seed=st.integers(0, 10**6),
           a=st.floats(-3, 3), b=st.floats(-3, 3))
    @settings(max_examples=20, deadline=None)
    def test_linearity_in_rho(self, seed, a, b, space, params):
        r1 = random_hermitian(space.dim, seed)
        r2 = random_hermitian(space.dim, seed + 7)
        H = random_hermitian(space.dim, seed + 13)
        lhs = lindblad_rhs(params, space, H, a * r1 + b * r2)
        rhs = a * lindblad_rhs(params, space, H, r1) \
            + b * lindblad_rhs(params, space, H, r2)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)


class TestEffectiveHamiltonian:
    @pytest.fixture(scope="class")
    def small_modes(self, params):
        return cm.ModeGrid(N=3, flight_time=1.0, kappa=params.kappa)

    def test_hermitian_without_dissipation(self, small_modes):
        p = cm.PhysicalParams(g=1.0, kappa=small_modes.kappa, gamma=1e-30)
        space = HilbertSpace(m_max=2)
        H = build_effective_hamiltonian(p, space, ConstantControl(0.5),
                                        small_modes, 0.0)
        defect = sp.linalg.norm(H - H.conj().T)
        assert defect < 1e-12 * sp.linalg.norm(H)

    def test_eigenvalue_imaginary_parts_nonpositive(self, params, small_modes,
                                                    ctrl):
        space = HilbertSpace(m_max=2)
        H = build_effective_hamiltonian(params, space, ctrl, small_modes, 0.0)
        ev = np.linalg.eigvals(H.toarray())
        assert np.max(ev.imag) < 1e-10

    def test_commutes_with_total_excitation_number(self, params, small_modes,
                                                   ctrl):
        space = HilbertSpace(m_max=2)
        H = build_effective_hamiltonian(params, space, ctrl, small_modes, 0.3)
        N_op = total_excitation_operator(space, small_modes)
        comm = H @ N_op - N_op @ H
        assert sp.linalg.norm(comm) < 1e-12 * sp.linalg.norm(H)

    def test_dimension_guard(self, params, ctrl):
        modes = cm.ModeGrid(N=21, flight_time=1.0, kappa=params.kappa)
        with pytest.raises(ValueError, match="exceeds"):
            build_effective_hamiltonian(params, HilbertSpace(2), ctrl, modes, 0.0)
