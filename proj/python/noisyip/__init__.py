"""Python bindings for the noisyip interior-point solver."""

from ._noisyip import (
    TRACE_HEADER,
    fraction_to_boundary,
    geometric_mean_tail,
    problems,
    profile,
    run_grid,
    sample_ball,
    slack_reset,
    solve,
    solve_trust_region,
    suite,
)

__all__ = [
    "TRACE_HEADER",
    "fraction_to_boundary",
    "geometric_mean_tail",
    "problems",
    "profile",
    "run_grid",
    "sample_ball",
    "slack_reset",
    "solve",
    "solve_trust_region",
    "suite",
]
