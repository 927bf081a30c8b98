"""Storage of weak coherent pulses in a single-atom cavity quantum memory.

Two independent solvers compute the storage efficiency eta and fidelity nu:
a truncated-Fock-space master equation in the displaced frame, and an
excitation-number-resolved pure-state solver under the no-jump generator.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .fields import (
    GaussianEnvelope,
    ModeGrid,
    OptimalSechControl,
    PhysicalParams,
    SechEnvelope,
    TabulatedControl,
    TabulatedEnvelope,
    TimeGrid,
    coherence_time,
    default_grid,
    default_mode_grid,
    envelope_from_modes,
    envelope_norm,
    gaussian_envelope,
    load_control_csv,
    load_envelope_csv,
    mode_amplitudes,
    optimal_control_sech,
    reference_params,
    sech_envelope,
    sech_T_for_coherence_time,
)
from .ladder import (
    LadderResult,
    coherent_efficiency_ladder,
    integrate_single_excitation_io,
    integrate_single_excitation_modes,
    integrate_two_excitation,
    ladder_initial_conditions,
    no_jump_probability,
    solve_ladder,
)
from .master import (
    MasterRunResult,
    integrate_master,
    intracavity_photons,
    storage_efficiency,
    truncation_scan,
)
from .metrics import (
    adiabaticity,
    cooperativity,
    ensemble_params,
    fidelity_from_efficiency,
    figures_of_merit,
    max_single_photon_efficiency,
    mixed_state_efficiency,
    series_eta,
)
from .operators import HilbertSpace, build_effective_hamiltonian, build_hamiltonian, lindblad_rhs

__version__ = "0.1.0"
