"""Pulse envelopes, transmission-line mode grids, and control fields.

All rates and frequencies are angular frequencies in rad/us, times are in us
and amplitudes of pulse envelopes carry units of 1/sqrt(us).  Conversion from
the "x 2pi MHz" convention happens once, in :meth:`PhysicalParams.from_mhz`.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TWO_PI = 2.0 * math.pi

# Default quadrature resolution for envelope integrals.  The integrands are
# smooth and essentially vanish at the window edges, so the trapezoid rule is
# spectrally accurate here.
DEFAULT_QUAD_SAMPLES = 8193


@dataclass(frozen=True)
class PhysicalParams:
    """Atom-cavity rates and detunings (angular frequencies, rad/us).

    ``gamma`` is the half width of the excited state: the population of |e>
    decays at rate ``2*gamma``.  ``kappa`` is the radiative linewidth of the
    coupling mirror and ``kappa_loss`` collects all other cavity losses.
    """

    g: float
    kappa: float
    gamma: float
    kappa_loss: float = 0.0
    Delta: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.g <= 0 or self.kappa <= 0 or self.gamma <= 0:
            raise ValueError("g, kappa and gamma must be positive")
        if self.kappa_loss < 0:
            raise ValueError("kappa_loss must be non-negative")

    @property
    def kappa_tot(self) -> float:
        return self.kappa + self.kappa_loss

    @classmethod
    def from_mhz(cls, g, kappa, gamma, kappa_loss=0.0, Delta=0.0, delta=0.0):
        """Build from linear frequencies in MHz (multiplied by 2pi)."""
        return cls(
            g=TWO_PI * g,
            kappa=TWO_PI * kappa,
            gamma=TWO_PI * gamma,
            kappa_loss=TWO_PI * kappa_loss,
            Delta=TWO_PI * Delta,
            delta=TWO_PI * delta,
        )


def reference_params() -> PhysicalParams:
    """Parameter set of the single-atom cavity memory experiment we model."""
    return PhysicalParams.from_mhz(g=4.9, kappa=2.42, gamma=3.03, kappa_loss=0.33)


@dataclass(frozen=True)
class TimeGrid:
    """Integration window [t1, t2] with adaptive-step tolerances."""

    t1: float
    t2: float
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10

    def __post_init__(self):
        if not self.t1 < self.t2:
            raise ValueError("require t1 < t2")

    def samples(self, num: int = DEFAULT_QUAD_SAMPLES) -> np.ndarray:
        return np.linspace(self.t1, self.t2, num)


def default_grid(T_c: float, rel_tol: float = 1e-8, abs_tol: float = 1e-10) -> TimeGrid:
    """Standard window [-6*T_c, +6*T_c]."""
    return TimeGrid(-6.0 * T_c, 6.0 * T_c, rel_tol=rel_tol, abs_tol=abs_tol)


# ---------------------------------------------------------------------------
# Pulse envelopes
# ---------------------------------------------------------------------------

class PulseEnvelope:
    """Complex pulse amplitude E_in(t), normalized so that the integral of
    |E_in|^2 over the real line equals the mean photon number ``n``."""

    n: float

    def __call__(self, t):
        raise NotImplementedError


@dataclass(frozen=True)
class SechEnvelope(PulseEnvelope):
    """E_in(t) = sqrt(n/T) sech(2 t / T)."""

    n: float
    T: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        amp = math.sqrt(self.n / self.T)
        return (amp / np.cosh(2.0 * t / self.T)).astype(complex)

    @property
    def coherence_time(self) -> float:
        # second moment of sech^2(2t/T): T_c = pi T / (4 sqrt(3))
        return math.pi * self.T / (4.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class GaussianEnvelope(PulseEnvelope):
    """Normalized Gaussian with coherence time T_c and center t0."""

    n: float
    T_c: float
    t0: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        amp = math.sqrt(self.n) * (2.0 * math.pi * self.T_c**2) ** (-0.25)
        return (amp * np.exp(-((t - self.t0) ** 2) / (4.0 * self.T_c**2))).astype(complex)


@dataclass(frozen=True)
class TabulatedEnvelope(PulseEnvelope):
    """Envelope sampled on an ascending time grid, linearly interpolated and
    zero outside the tabulated range."""

    times: np.ndarray
    values: np.ndarray
    n: float = field(init=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        norm = np.trapezoid(np.abs(values) ** 2, times)
        object.__setattr__(self, "n", float(norm))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        re = np.interp(t, self.times, self.values.real, left=0.0, right=0.0)
        im = np.interp(t, self.times, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im


def sech_envelope(n: float, T: float) -> SechEnvelope:
    """Hyperbolic-secant envelope with mean photon number ``n``.

    ``n = 0`` is allowed and gives the identically vanishing envelope.
    """
    if n < 0:
        raise ValueError("photon number n must be non-negative")
    if T <= 0:
        raise ValueError("characteristic time T must be positive")
    return SechEnvelope(n=n, T=T)


def gaussian_envelope(n: float, T_c: float, t0: float = 0.0) -> GaussianEnvelope:
    """Gaussian envelope with coherence time ``T_c`` centered at ``t0``."""
    if n < 0:
        raise ValueError("photon number n must be non-negative")
    if T_c <= 0:
        raise ValueError("coherence time T_c must be positive")
    return GaussianEnvelope(n=n, T_c=T_c, t0=t0)


def sech_T_for_coherence_time(T_c: float) -> float:
    """Characteristic time T of the sech pulse with coherence time T_c."""
    return 4.0 * math.sqrt(3.0) * T_c / math.pi


def envelope_norm(env: PulseEnvelope, t1: float, t2: float,
                  num: int = DEFAULT_QUAD_SAMPLES) -> float:
    """Quadrature of |E_in|^2 over [t1, t2] (number of impinging photons)."""
    if not t1 < t2:
        raise ValueError("require t1 < t2")
    t = np.linspace(t1, t2, num)
    return float(np.trapezoid(np.abs(env(t)) ** 2, t))


def coherence_time(env: PulseEnvelope, grid: TimeGrid,
                   num: int = DEFAULT_QUAD_SAMPLES) -> float:
    """RMS width sqrt(<t^2> - <t>^2) of |E_in|^2 on the grid window.

    Moments are normalized by the window norm, so the result does not depend
    on the photon number.
    """
    t = grid.samples(num)
    w = np.abs(env(t)) ** 2
    norm = np.trapezoid(w, t)
    if norm <= 0.0:
        raise ValueError("coherence time undefined for a zero-norm envelope")
    t_mean = np.trapezoid(t * w, t) / norm
    t2_mean = np.trapezoid(t * t * w, t) / norm
    return float(math.sqrt(t2_mean - t_mean**2))


# ---------------------------------------------------------------------------
# Transmission-line mode grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeGrid:
    """Discretized transmission line of N standing-wave modes.

    ``flight_time`` is L/c in us.  Mode detunings relative to the cavity are
    Delta_k = j * pi / flight_time for j = -(N-1)/2 .. (N-1)/2, and the
    uniform coupling lambda reproduces the radiative linewidth kappa through
    kappa = flight_time * lambda^2.
    """

    N: int
    flight_time: float
    kappa: float

    def __post_init__(self):
        if self.N < 1 or self.N % 2 == 0:
            raise ValueError("N must be a positive odd integer")
        if self.flight_time <= 0:
            raise ValueError("flight_time must be positive")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")

    @property
    def detunings(self) -> np.ndarray:
        j = np.arange(self.N) - (self.N - 1) // 2
        return j * math.pi / self.flight_time

    @property
    def lam(self) -> float:
        return math.sqrt(self.kappa / self.flight_time)

    @property
    def spacing(self) -> float:
        return math.pi / self.flight_time


def default_mode_grid(params: PhysicalParams, T_c: float,
                      N: int = 311, L_over_cTc: float = 12.0) -> ModeGrid:
    """Standard grid: N = 311 modes on a line of flight time 12*T_c."""
    return ModeGrid(N=N, flight_time=L_over_cTc * T_c, kappa=params.kappa)


def mode_amplitudes(env: PulseEnvelope, modes: ModeGrid,
                    t1: float, t2: float,
                    num: int = DEFAULT_QUAD_SAMPLES) -> np.ndarray:
    """Coherent-state amplitudes alpha_k of the envelope on the mode grid.

    alpha_k = sqrt(c/2L) * integral over [t1, t2] of exp(i Delta_k t) E_in(t).
    Warns when the grid does not capture the envelope's bandwidth.
    """
    t = np.linspace(t1, t2, num)
    e = env(t)
    phases = np.exp(1j * np.outer(modes.detunings, t))
    alphas = math.sqrt(0.5 / modes.flight_time) * np.trapezoid(phases * e, t, axis=1)
    norm_in = float(np.trapezoid(np.abs(e) ** 2, t))
    captured = float(np.sum(np.abs(alphas) ** 2))
    if norm_in > 0 and captured < norm_in * (1.0 - 1e-3):
        warnings.warn(
            f"mode grid captures only {captured / norm_in:.6f} of the pulse norm; "
            "increase N or L",
            stacklevel=2,
        )
    return alphas


def envelope_from_modes(alphas: np.ndarray, modes: ModeGrid, t):
    """Reconstruct the envelope amplitude at time(s) t from mode amplitudes."""
    alphas = np.asarray(alphas, dtype=complex)
    if alphas.shape != (modes.N,):
        raise ValueError("alphas length must match the mode grid")
    t = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.outer(np.atleast_1d(t), modes.detunings))
    rec = math.sqrt(0.5 / modes.flight_time) * phases @ alphas
    return rec if t.ndim else complex(rec[0])


# ---------------------------------------------------------------------------
# Control fields
# ---------------------------------------------------------------------------

class ControlField:
    """Rabi frequency Omega(t) of the control laser [rad/us]."""

    def __call__(self, t):
        raise NotImplementedError


@dataclass(frozen=True)
class OptimalSechControl(ControlField):
    """Adiabatic control that optimally stores a single sech photon:

    Omega(t) = sqrt(2 gamma (1 + C) / ((exp(4 t / T) + 1) T)).
    """

    gamma: float
    C: float
    T: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        x = 4.0 * t / self.T
        plateau = math.sqrt(2.0 * self.gamma * (1.0 + self.C) / self.T)
        # 1/sqrt(e^x + 1) written overflow-safe for large positive x
        xp = np.clip(x, 0.0, None)
        factor = np.exp(-0.5 * xp) / np.sqrt(1.0 + np.exp(-np.abs(x)))
        out = plateau * np.where(x <= 0, 1.0 / np.sqrt(np.exp(x) + 1.0), factor)
        return out if out.ndim else float(out)

    @property
    def plateau(self) -> float:
        return math.sqrt(2.0 * self.gamma * (1.0 + self.C) / self.T)


@dataclass(frozen=True)
class ConstantControl(ControlField):
    value: complex = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.value, dtype=complex)
        return out if t.ndim else complex(self.value)


@dataclass(frozen=True)
class TabulatedControl(ControlField):
    """Control sampled on an ascending time grid, linearly interpolated."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        re = np.interp(t, self.times, self.values.real)
        im = np.interp(t, self.times, self.values.imag)
        return re + 1j * im


def optimal_control_sech(params: PhysicalParams, T: float) -> OptimalSechControl:
    """Closed-form optimal control for a sech input of characteristic time T.

    The closed form applies only to the sech envelope; for other shapes
    supply a :class:`TabulatedControl`.
    """
    if T <= 0:
        raise ValueError("characteristic time T must be positive")
    C = params.g**2 / (params.kappa_tot * params.gamma)
    return OptimalSechControl(gamma=params.gamma, C=C, T=T)


# ---------------------------------------------------------------------------
# CSV input for tabulated envelopes/controls
# ---------------------------------------------------------------------------

def _read_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a 2-column (t, Re) or 3-column (t, Re, Im) CSV with a header."""
    path = Path(path)
    times, values = [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file")
        for row in reader:
            if not row:
                continue
            if len(row) == 2:
                times.append(float(row[0]))
                values.append(complex(float(row[1]), 0.0))
            elif len(row) == 3:
                times.append(float(row[0]))
                values.append(complex(float(row[1]), float(row[2])))
            else:
                raise ValueError(f"{path}: expected 2 or 3 columns, got {len(row)}")
    return np.asarray(times), np.asarray(values)


def load_envelope_csv(path) -> TabulatedEnvelope:
    times, values = _read_table(path)
    return TabulatedEnvelope(times=times, values=values)


def load_control_csv(path) -> TabulatedControl:
    times, values = _read_table(path)
    return TabulatedControl(times=times, values=values)
