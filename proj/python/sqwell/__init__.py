"""Two-channel pseudo-Hermitian square well: secular roots, metrics and a finite-difference oracle."""

from ._sqwell import (
    SqwellError,
    biorthogonality_matrix,
    critical_coupling,
    invariant_suite,
    oracle_eigenvalues,
    perturbative_eps,
    residual,
    solve_level,
    spectrum,
    theta_metric,
)

__all__ = [
    "SqwellError",
    "biorthogonality_matrix",
    "critical_coupling",
    "invariant_suite",
    "oracle_eigenvalues",
    "perturbative_eps",
    "residual",
    "solve_level",
    "spectrum",
    "theta_metric",
]
