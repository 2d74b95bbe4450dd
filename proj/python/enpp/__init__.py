"""Spectral solver for the Euler-Nernst-Planck-Poisson system."""

from ._enpp import (
    CflViolation,
    ConfigError,
    Error,
    FormatError,
    Grid,
    GridMismatch,
    InvalidArgument,
    NonNeutral,
    NumericalFailure,
    besov_norm,
    check_trajectory,
    dyadic_block,
    dyadic_blocks,
    integrate,
    leray_project,
    lifespan_lower_bound,
    lp_norm,
    simulate,
    solve_potential,
    step,
)

__all__ = [
    "CflViolation",
    "ConfigError",
    "Error",
    "FormatError",
    "Grid",
    "GridMismatch",
    "InvalidArgument",
    "NonNeutral",
    "NumericalFailure",
    "besov_norm",
    "check_trajectory",
    "dyadic_block",
    "dyadic_blocks",
    "integrate",
    "leray_project",
    "lifespan_lower_bound",
    "lp_norm",
    "simulate",
    "solve_potential",
    "step",
]
