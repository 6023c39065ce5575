"""Diamond-Halberstam-Richert sieve functions and admissible r for almost-prime
values of polynomial products at prime arguments."""
from .bounds import (ParameterPoint, ThresholdBreakdown, asymptotic_params, compute_C0,
                     integral_I, integral_J, r_threshold)
from .exceptions import (AccuracyError, ConvergenceError, DomainError,
                         InfeasibleParametersError, InputError, SieveError)
from .optimizer import AdmissibleResult, generate_table, minimize_r, solve_u, solve_w
from .sievefn import (SieveFunctionTable, SieveLimits, build_sieve_function_table,
                      get_limits, sieve_table, solve_sieve_limits)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "AdmissibleResult", "ConvergenceError", "DomainError",
    "InfeasibleParametersError", "InputError", "ParameterPoint", "SieveError",
    "SieveFunctionTable", "SieveLimits", "ThresholdBreakdown", "asymptotic_params",
    "build_sieve_function_table", "compute_C0", "generate_table", "get_limits",
    "integral_I", "integral_J", "minimize_r", "r_threshold", "sieve_table",
    "solve_sieve_limits", "solve_u", "solve_w",
]
