"""Polynomial-system arithmetic and desk-scale empirical checks."""
from .density import DensitySums, V_product, Vprime_product, density_sum, mertens_ratio
from .empirical import (EmpiricalReport, WeightedSum, count_almost_primes,
                        weighted_sum_W)
from .factor import factorize, is_prime, omega_with_multiplicity, pollard_rho
from .polynomial import (Polynomial, PolynomialSystem, irreducibility_screen,
                         parse_polynomial, parse_polynomial_system)
from .primes import primes_in_range, primes_up_to
from .roots import HypothesisReport, check_hypothesis, prime_root_table, rho, rho1, rho2

__all__ = [
    "DensitySums", "EmpiricalReport", "HypothesisReport", "Polynomial", "PolynomialSystem",
    "V_product", "Vprime_product", "WeightedSum", "check_hypothesis", "count_almost_primes",
    "density_sum", "factorize", "irreducibility_screen", "is_prime", "mertens_ratio",
    "omega_with_multiplicity", "parse_polynomial", "parse_polynomial_system", "pollard_rho",
    "prime_root_table", "primes_in_range", "primes_up_to", "rho", "rho1", "rho2",
    "weighted_sum_W",
]
