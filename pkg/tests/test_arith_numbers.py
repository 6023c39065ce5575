import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dhrsieve.arith import factorize, is_prime, omega_with_multiplicity, primes_in_range, primes_up_to
from dhrsieve.arith.factor import pollard_rho, reconstruct
from dhrsieve.arith.primes import iter_prime_segments, prime_count
from dhrsieve.exceptions import DomainError, FactorizationBudgetError


def test_primes_up_to_small():
    assert list(primes_up_to(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(1)) == 0
    assert list(primes_up_to(2)) == [2]


@pytest.mark.parametrize("lo, hi", [(0, 100), (999_000, 1_001_000), (10 ** 7, 10 ** 7 + 5000),
                                    (262_100, 262_200)])
def test_primes_in_range_against_sympy(lo, hi):
    assert list(primes_in_range(lo, hi)) == list(sympy.primerange(lo, hi))


def test_segments_join_without_gaps():
    parts = list(iter_prime_segments(2, 100_000, segment=997))
    joined = np.concatenate(parts)
    assert list(joined) == list(sympy.primerange(2, 100_000))


def test_prime_count():
    assert prime_count(10 ** 6) == 78498


@pytest.mark.parametrize("n, omega", [(12, 3), (1, 0), (2, 1), (1024, 10), (-12, 3),
                                      (1333, 2), (1337, 2), (1782221, 4)])
def test_omega_examples(n, omega):
    assert omega_with_multiplicity(n) == omega


def test_omega_of_H_at_11(H):
    assert H(11) == 1782221
    assert sum(omega_with_multiplicity(h) for h in H.factor_values(11)) == 4
    assert factorize(H(11)) == {7: 1, 31: 1, 43: 1, 191: 1}


def test_factorize_zero():
    with pytest.raises(DomainError):
        factorize(0)


def test_factorize_against_sympy():
    rng = random.Random(11)
    samples = [rng.randrange(2, 10 ** k) for k in (6, 12, 18, 24, 30) for _ in range(8)]
    samples += [(10 ** 9 + 7) * (10 ** 9 + 9), (2 ** 31 - 1) ** 2 * 3, 2 ** 61 - 1,
                1000003 * 1000033 * 1000037]
    for n in samples:
        f = factorize(n)
        assert dict(f) == sympy.factorint(n), n
        assert reconstruct(f) == n


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10 ** 20))
def test_factorization_soundness(n):
    f = factorize(n)
    assert reconstruct(f) == n
    assert all(is_prime(p) for p in f)


def test_is_prime_against_sympy():
    rng = random.Random(5)
    for n in list(range(-5, 3000)) + [rng.randrange(10 ** 15, 10 ** 16) for _ in range(300)]:
        assert is_prime(n) == sympy.isprime(n), n


@pytest.mark.parametrize("n", [561, 1105, 41041, 3215031751, 3825123056546413051,
                               318665857834031151167461])
def test_is_prime_rejects_pseudoprimes(n):
    # Carmichael numbers and strong pseudoprimes to many small bases
    assert not is_prime(n)
    assert not sympy.isprime(n)


def test_is_prime_large_known():
    assert is_prime(2 ** 89 - 1)
    assert is_prime(2 ** 127 - 1)
    assert not is_prime((2 ** 89 - 1) * (2 ** 61 - 1))


def test_budget_error():
    n = 1000000007 * 998244353
    with pytest.raises(FactorizationBudgetError) as err:
        pollard_rho(n, budget=4)
    assert err.value.n == n
    with pytest.raises(FactorizationBudgetError):
        factorize((10 ** 12 + 39) * (10 ** 12 + 61), budget=4)


def test_factorize_deterministic_in_seed():
    n = (10 ** 12 + 39) * (10 ** 12 + 61) * 97
    assert factorize(n, seed=1) == factorize(n, seed=2)
