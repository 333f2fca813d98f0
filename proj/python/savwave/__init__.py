"""SAV Fourier-spectral solver for the 2D fractional generalized wave equation."""

from ._savwave import (
    EnergyRecord,
    ErrorRow,
    Example,
    Grid,
    NonIntegerStepCount,
    NonpositiveEnergy,
    Potential,
    Problem,
    ProblemError,
    ResidualError,
    SpectralError,
    Stepper,
    StudyError,
    default_c0,
    energy_E,
    example_problem,
    frac_laplacian,
    initial_state,
    inner_l2,
    l2_norm,
    observed_rate,
    run,
    seminorm,
    spatial_study,
    temporal_study,
)

__all__ = [name for name in dir() if not name.startswith("_")]
