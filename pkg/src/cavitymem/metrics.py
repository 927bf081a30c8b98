"""Closed-form figures of merit and parameter transforms."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .fields import PhysicalParams

ADIABATIC_THRESHOLD = 10.0


@dataclass(frozen=True)
class FigureOfMerit:
    C: float
    eta_max_sp: float
    adiabaticity: float


def cooperativity(params: PhysicalParams) -> float:
    """C = g^2 / (kappa_tot * gamma)."""
    return params.g**2 / (params.kappa_tot * params.gamma)


def max_single_photon_efficiency(params: PhysicalParams) -> float:
    """eta_max^sp = (kappa / kappa_tot) * C / (1 + C)."""
    C = cooperativity(params)
    return (params.kappa / params.kappa_tot) * C / (1.0 + C)


def fidelity_from_efficiency(eta: float, norm: float) -> float:
    """nu = eta / norm, with norm the number of impinging photons."""
    if norm <= 0:
        raise ValueError("impinging photon number must be positive")
    return eta / norm


def series_eta(n: float, eta_1: float, eta_2: float) -> tuple[float, float]:
    """Second-order small-n expansion of the coherent-pulse efficiency.

    eta = n eta_1 + n^2 (eta_2/2 - eta_1),  nu = eta_1 + n (eta_2/2 - eta_1).
    """
    if n < 0:
        raise ValueError("photon number n must be non-negative")
    slope = eta_2 / 2.0 - eta_1
    nu = eta_1 + n * slope
    return n * nu, nu


def mixed_state_efficiency(weights, etas) -> float:
    """Convex combination sum_a p_a eta_a for a mixed input state."""
    weights = np.asarray(weights, dtype=float)
    etas = np.asarray(etas, dtype=float)
    if weights.shape != etas.shape:
        raise ValueError("weights and etas must have the same length")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-10:
        raise ValueError("weights must be non-negative and sum to one")
    return float(weights @ etas)


def adiabaticity(params: PhysicalParams, T_c: float) -> tuple[float, bool]:
    """gamma * T_c * C and whether it clears the adiabaticity threshold."""
    if T_c <= 0:
        raise ValueError("T_c must be positive")
    value = params.gamma * T_c * cooperativity(params)
    return value, value > ADIABATIC_THRESHOLD


def figures_of_merit(params: PhysicalParams, T_c: float) -> FigureOfMerit:
    return FigureOfMerit(
        C=cooperativity(params),
        eta_max_sp=max_single_photon_efficiency(params),
        adiabaticity=adiabaticity(params, T_c)[0],
    )


def ensemble_params(params: PhysicalParams, M: int) -> PhysicalParams:
    """Map to an M-atom ensemble memory: g -> g sqrt(M), all else unchanged.

    Valid for single-photon input only; with more excitations in the pulse
    the collective dynamics leaves the three-state manifold.
    """
    if not isinstance(M, (int, np.integer)) or M < 1:
        raise ValueError("atom count M must be an integer >= 1")
    return dataclasses.replace(params, g=params.g * math.sqrt(M))
