"""Coupled giant spins: exact diagonalization, entanglement, Husimi functions, classical limit."""

from ._core import (
    ConvergenceError,
    DimensionError,
    DomainError,
    Error,
    NormalizationError,
    __version__,
    apply_hamiltonian,
    coherent_amps,
    entanglement_entropy,
    entanglement_sweep,
    find_mu_qc,
    fixed_points,
    ground_state,
    hamiltonian,
    integrate,
    q_cross_section,
    spectrum,
    wehrl_entropy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
