import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cavitymem as cm
from cavitymem import fields

SQRT3 = math.sqrt(3.0)


# ---------------------------------------------------------------------------
# Physical parameters
# ---------------------------------------------------------------------------

class TestPhysicalParams:
    def test_from_mhz_multiplies_by_two_pi(self):
        p = cm.PhysicalParams.from_mhz(g=4.9, kappa=2.42, gamma=3.03,
                                       kappa_loss=0.33)
        assert p.g == pytest.approx(2 * math.pi * 4.9)
        assert p.kappa == pytest.approx(2 * math.pi * 2.42)
        assert p.gamma == pytest.approx(2 * math.pi * 3.03)
        assert p.kappa_loss == pytest.approx(2 * math.pi * 0.33)

    def test_kappa_tot(self):
        p = cm.reference_params()
        assert p.kappa_tot == pytest.approx(2 * math.pi * 2.75)

    @pytest.mark.parametrize("kw", [
        {"g": 0.0}, {"g": -1.0}, {"kappa": 0.0}, {"gamma": -0.1},
        {"kappa_loss": -0.01},
    ])
    def test_validation(self, kw):
        base = dict(g=1.0, kappa=1.0, gamma=1.0)
        base.update(kw)
        with pytest.raises(ValueError):
            cm.PhysicalParams(**base)


# ---------------------------------------------------------------------------
# Envelopes
# ---------------------------------------------------------------------------

class TestSechEnvelope:
    def test_peak_amplitude(self, T):
        # sqrt(n/T) at t=0 for n=1, T = 4*sqrt(3)*0.5/pi
        env = cm.sech_envelope(1.0, T)
        assert complex(env(0.0)).real == pytest.approx(0.9523128, abs=1e-6)
        assert complex(env(0.0)).imag == 0.0

    def test_characteristic_time_value(self):
        # T for T_c = 0.5 us; frozen from 4*sqrt(3)*T_c/pi
        assert cm.sech_T_for_coherence_time(0.5) == pytest.approx(
            1.1026577908435842, rel=1e-14)

    @given(n=st.floats(1e-4, 50.0), T=st.floats(0.05, 5.0))
    @settings(max_examples=50, deadline=None)
    def test_norm_matches_analytic(self, n, T):
        # integral of (n/T) sech^2(2t/T) over [-6T, 6T] = n * tanh(12)
        env = cm.sech_envelope(n, T)
        got = cm.envelope_norm(env, -6.0 * T, 6.0 * T)
        assert got == pytest.approx(n * math.tanh(12.0), rel=1e-8)

    def test_window_norm_defect(self, T, grid):
        # over [-6 T_c, 6 T_c] the analytic defect is 1 - tanh(6/T) ~ 3.76e-5
        env = cm.sech_envelope(1.0, T)
        norm = cm.envelope_norm(env, grid.t1, grid.t2)
        assert norm == pytest.approx(math.tanh(6.0 / T), rel=1e-9)
        assert 3.7e-5 < 1.0 - norm < 3.8e-5

    def test_coherence_time_rms(self, T, grid):
        env = cm.sech_envelope(2.0, T)
        assert env.coherence_time == pytest.approx(0.5, rel=1e-12)
        # RMS width on the finite window: slightly below 0.5 (tail truncation)
        assert cm.coherence_time(env, grid) == pytest.approx(0.5, abs=1e-3)

    def test_zero_photon_number_gives_zero_envelope(self):
        env = cm.sech_envelope(0.0, 1.0)
        assert np.all(env(np.linspace(-3, 3, 7)) == 0)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            cm.sech_envelope(-0.1, 1.0)
        with pytest.raises(ValueError):
            cm.sech_envelope(1.0, 0.0)


class TestGaussianEnvelope:
    @given(n=st.floats(1e-4, 10.0), T_c=st.floats(0.1, 2.0))
    @settings(max_examples=50, deadline=None)
    def test_norm_and_peak(self, n, T_c):
        env = cm.gaussian_envelope(n, T_c)
        assert complex(env(0.0)).real == pytest.approx(
            math.sqrt(n) * (2 * math.pi * T_c**2) ** (-0.25), rel=1e-12)
        norm = cm.envelope_norm(env, -10 * T_c, 10 * T_c)
        assert norm == pytest.approx(n, rel=1e-7)

    def test_rms_width_is_T_c(self):
        env = cm.gaussian_envelope(1.0, 0.7, t0=0.3)
        grid = cm.TimeGrid(0.3 - 8 * 0.7, 0.3 + 8 * 0.7)
        assert cm.coherence_time(env, grid) == pytest.approx(0.7, rel=1e-6)

    def test_validation(self):
        with pytest.raises(ValueError):
            cm.gaussian_envelope(1.0, -0.5)


class TestTabulatedEnvelope:
    def test_photon_number_inferred_from_samples(self, T):
        ref = cm.sech_envelope(0.37, T)
        t = np.linspace(-6 * T, 6 * T, 4001)
        env = fields.TabulatedEnvelope(times=t, values=ref(t))
        assert env.n == pytest.approx(0.37 * math.tanh(12.0), rel=1e-6)
        assert complex(env(100.0)) == 0.0  # zero outside the table

    def test_non_monotone_times_rejected(self):
        with pytest.raises(ValueError):
            fields.TabulatedEnvelope(times=np.array([0.0, 0.0, 1.0]),
                                     values=np.zeros(3, dtype=complex))


def test_time_grid_validation():
    with pytest.raises(ValueError):
        cm.TimeGrid(1.0, 1.0)


def test_envelope_norm_zero_envelope_coherence_time_raises(grid):
    env = cm.sech_envelope(0.0, 1.0)
    with pytest.raises(ValueError):
        cm.coherence_time(env, grid)


# ---------------------------------------------------------------------------
# Mode grid
# ---------------------------------------------------------------------------

class TestModeGrid:
    def test_detunings_symmetric_and_spaced(self, params, T_c):
        modes = cm.default_mode_grid(params, T_c)
        det = modes.detunings
        assert modes.N == 311
        assert det.shape == (311,)
        np.testing.assert_allclose(det, -det[::-1])
        assert det[1] - det[0] == pytest.approx(math.pi / (12 * T_c))

    def test_coupling_reproduces_kappa(self, params, T_c):
        modes = cm.default_mode_grid(params, T_c)
        assert modes.flight_time * modes.lam**2 == pytest.approx(params.kappa)

    @pytest.mark.parametrize("N", [0, 2, 10])
    def test_even_or_nonpositive_N_rejected(self, N):
        with pytest.raises(ValueError):
            cm.ModeGrid(N=N, flight_time=1.0, kappa=1.0)

    def test_parseval(self, params, T_c, T, grid):
        env = cm.sech_envelope(1.0, T)
        modes = cm.default_mode_grid(params, T_c)
        alphas = cm.mode_amplitudes(env, modes, grid.t1, grid.t2)
        captured = np.sum(np.abs(alphas) ** 2)
        window = cm.envelope_norm(env, grid.t1, grid.t2)
        assert abs(captured - window) < 1e-4

    def test_round_trip_reconstruction(self, params, T_c, T, grid):
        env = cm.sech_envelope(1.0, T)
        modes = cm.default_mode_grid(params, T_c)
        alphas = cm.mode_amplitudes(env, modes, grid.t1, grid.t2)
        t = grid.samples(2001)
        rec = cm.envelope_from_modes(alphas, modes, t)
        ref = env(t)
        rel_l2 = np.sqrt(np.trapezoid(np.abs(rec - ref) ** 2, t)
                         / np.trapezoid(np.abs(ref) ** 2, t))
        assert rel_l2 < 1e-3

    def test_bandwidth_warning_on_coarse_grid(self, params, T_c, T, grid):
        env = cm.sech_envelope(1.0, T)
        modes = cm.default_mode_grid(params, T_c, N=11)
        with pytest.warns(UserWarning, match="captures only"):
            cm.mode_amplitudes(env, modes, grid.t1, grid.t2)

    def test_reconstruction_rejects_wrong_length(self, params, T_c):
        modes = cm.default_mode_grid(params, T_c, N=31)
        with pytest.raises(ValueError):
            cm.envelope_from_modes(np.zeros(30, dtype=complex), modes, 0.0)


# ---------------------------------------------------------------------------
# Control fields
# ---------------------------------------------------------------------------

class TestOptimalControl:
    def test_value_at_center(self, ctrl):
        assert float(ctrl(0.0)) == pytest.approx(8.186344, abs=1e-4)

    def test_plateau(self, ctrl, params, T):
        C = params.g**2 / (params.kappa_tot * params.gamma)
        expected = math.sqrt(2 * params.gamma * (1 + C) / T)
        assert ctrl.plateau == pytest.approx(expected, rel=1e-12)
        assert ctrl.plateau == pytest.approx(11.577239, abs=1e-4)

    def test_tail_ratio(self, ctrl, T_c):
        # frozen: Omega(6 T_c)/plateau = 1/sqrt(exp(24/T) ... ) ~ 4.333e-3
        ratio = float(ctrl(6.0 * T_c)) / ctrl.plateau
        assert ratio == pytest.approx(4.3334e-3, rel=1e-3)

    @given(t=st.floats(-50.0, 50.0))
    @settings(max_examples=100, deadline=None)
    def test_closed_form_identity(self, t, ctrl, params, T):
        # Omega(t)^2 (exp(4t/T) + 1) T == 2 gamma (1 + C), overflow-safe
        om = float(ctrl(t))
        x = 4.0 * t / T
        if x < 500:
            lhs = om**2 * (math.exp(x) + 1.0) * T
            C = params.g**2 / (params.kappa_tot * params.gamma)
            assert lhs == pytest.approx(2 * params.gamma * (1 + C), rel=1e-10)
        assert om > 0.0 and np.isfinite(om)

    def test_monotone_decreasing(self, ctrl):
        t = np.linspace(-10, 10, 801)
        om = ctrl(t)
        assert np.all(np.diff(om) <= 0)
        # strictly decreasing once past the plateau saturation
        t = np.linspace(-2, 10, 481)
        assert np.all(np.diff(ctrl(t)) < 0)

    def test_validation(self, params):
        with pytest.raises(ValueError):
            cm.optimal_control_sech(params, 0.0)


class TestTabulatedIO:
    def test_envelope_csv_round_trip(self, tmp_path, T):
        ref = cm.sech_envelope(1.0, T)
        t = np.linspace(-3, 3, 501)
        path = tmp_path / "env.csv"
        rows = "\n".join(f"{ti},{v.real},{v.imag}" for ti, v in zip(t, ref(t)))
        path.write_text("t,re,im\n" + rows + "\n")
        env = cm.load_envelope_csv(path)
        np.testing.assert_allclose(env(t), ref(t), atol=1e-12)

    def test_control_csv_two_column(self, tmp_path):
        path = tmp_path / "ctrl.csv"
        path.write_text("t,omega\n0.0,1.5\n1.0,2.5\n")
        ctrl = cm.load_control_csv(path)
        assert complex(ctrl(0.5)) == pytest.approx(2.0)

    def test_bad_column_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,a,b,c\n0,1,2,3\n")
        with pytest.raises(ValueError, match="2 or 3 columns"):
            cm.load_control_csv(path)
