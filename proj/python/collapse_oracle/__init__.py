"""Maximal reliability of experiments that try to detect wave-function collapse.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its functions. Vectors are 1-d complex128 numpy arrays, operators
square 2-d complex128 arrays, and the collapse basis is the standard basis.
"""

from collapse_oracle._core import (
    blind_guess_thresholds,
    collapse_pair,
    conjecture_scan,
    diag_part,
    estimate_lambda,
    f_psi,
    f_psi_inverse,
    helstrom,
    hermitian_eig,
    lambda_conjecture_bound,
    optimal_known_psi,
    partial_trace_t,
    reliability_density,
    reliability_known_psi,
    rmax_2d_closed_form,
    rmax_bounds_known_psi,
    rmax_density_upper_bound,
    sample_uniform_state,
    simulate_reliability,
    stern_gerlach_direction,
)

__all__ = [
    "blind_guess_thresholds",
    "collapse_pair",
    "conjecture_scan",
    "diag_part",
    "estimate_lambda",
    "f_psi",
    "f_psi_inverse",
    "helstrom",
    "hermitian_eig",
    "lambda_conjecture_bound",
    "optimal_known_psi",
    "partial_trace_t",
    "reliability_density",
    "reliability_known_psi",
    "rmax_2d_closed_form",
    "rmax_bounds_known_psi",
    "rmax_density_upper_bound",
    "sample_uniform_state",
    "simulate_reliability",
    "stern_gerlach_direction",
]

__version__ = "0.1.0"
