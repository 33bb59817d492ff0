"""Floquet quasi-energies and driven dynamics of anisotropic and asymmetric Rabi models."""

from ._core import (
    ModelParams,
    Truncation,
    analytic_levels,
    analytic_quasi_energy,
    detuning_gap,
    effective_hamiltonian,
    evolve,
    fold_to_first_bz,
    fourier_spectrum,
    kick_harmonics,
    lab_hamiltonian,
    numeric_quasi_energies,
    rotating_components,
    run_cli,
    time_average,
)

__all__ = [
    "ModelParams",
    "Truncation",
    "analytic_levels",
    "analytic_quasi_energy",
    "detuning_gap",
    "effective_hamiltonian",
    "evolve",
    "fold_to_first_bz",
    "fourier_spectrum",
    "kick_harmonics",
    "lab_hamiltonian",
    "numeric_quasi_energies",
    "rotating_components",
    "run_cli",
    "time_average",
]
