"""Truncated variation, segment crossings and killed Brownian motion checks."""
from .crossings import (
    CrossingKind,
    CrossingProfile,
    CrossingTrace,
    PiecewiseDensity,
    banach_limit,
    count_crossings,
    crossing_profile,
    profile_integral,
    sandwich_check,
)
from .exceptions import (
    DomainError,
    EmptyPath,
    IndexOutOfRange,
    LengthMismatch,
    NonFiniteValue,
    NonMonotoneTimes,
    ParseError,
    TooLongForExhaustive,
    ToleranceViolated,
    VarixError,
)
from .paths import (
    DiscretePath,
    StepFunction,
    from_samples,
    oscillation,
    sorted_values,
    uniform_distance,
)
from .stochastic import (
    KilledBMConfig,
    MCEstimate,
    closed_form_eutv,
    mc_crossing_tail,
    mc_expected_utv,
    simulate_killed_bm,
    upcrossing_law,
)
from .variation import (
    INF,
    SweepDecomposition,
    VariationTriple,
    brute_force_variations,
    classical_variations,
    first_exit_indices,
    optimal_approximation,
    sweep_decompose,
    truncated_variations,
)

__version__ = "0.1.0"
