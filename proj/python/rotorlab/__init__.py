"""Quantum and classical point rotor on the sphere, pseudosphere and torus."""

from ._core import (
    AllowedInterval,
    ConfigError,
    ConvergenceFailure,
    DomainError,
    GridTooCoarse,
    HemisphereError,
    ManifoldSpec,
    NoAllowedRegion,
    Potential,
    RadialMomentum,
    RotorlabError,
    RotorParams,
    SingularMetric,
    SpectrumResult,
    co_moving_velocity,
    embed,
    euler_matrix,
    hamiltonian,
    implicit_residual,
    integrate,
    laplacian_coefficients,
    lorentz_matrix,
    metric_tensor,
    momenta_from_rates,
    profile,
    radial_q,
    rates_from_momenta,
    run_checks,
    scalar_curvature,
    solve_spectrum,
    spectrum_scan,
)

__version__ = "0.1.0"
