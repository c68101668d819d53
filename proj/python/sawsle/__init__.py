"""Half-plane SAW Monte Carlo tests of radial SLE(8/3)."""

from ._sawsle import (
    Accumulator,
    DomainError,
    EmptyAccumulatorError,
    FormatError,
    InsufficientDataError,
    __version__,
    analyze,
    angular_density,
    enumerate_walks,
    exact_cdf,
    excursion_map,
    factors,
    is_valid_walk,
    run,
    sample_walks,
    selftest,
    walk_stats,
    walk_weight,
)

__all__ = [
    "Accumulator",
    "DomainError",
    "EmptyAccumulatorError",
    "FormatError",
    "InsufficientDataError",
    "__version__",
    "analyze",
    "angular_density",
    "enumerate_walks",
    "exact_cdf",
    "excursion_map",
    "factors",
    "is_valid_walk",
    "run",
    "sample_walks",
    "selftest",
    "walk_stats",
    "walk_weight",
]
