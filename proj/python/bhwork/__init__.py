"""Quantum and classical work statistics for driven Bose-Hubbard chains."""

from ._core import (  # noqa: F401
    Boundary,
    CapExceededError,
    ConfigError,
    ConvergenceError,
    DriveProtocol,
    FockBasis,
    ModelParams,
    TransitionDistribution,
    build_basis,
    classical_transition_mc,
    classical_transition_shoot,
    cumulative,
    dense_spectrum,
    quantum_transition,
    quantum_work_distribution,
    rmse,
    weyl_dos,
    __version__,
)
