"""Prime factorisation: trial division, Miller-Rabin and Pollard rho (Brent)."""
from __future__ import annotations

import math
import random
from collections import Counter
from functools import lru_cache

from ..exceptions import DomainError, FactorizationBudgetError
from .primes import primes_up_to

TRIAL_LIMIT = 10 ** 5
# the first 13 primes as bases decide primality below this bound
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
RANDOM_ROUNDS = 40
RHO_BUDGET = 1 << 22


@lru_cache(maxsize=1)
def _small_primes():
    return tuple(int(p) for p in primes_up_to(TRIAL_LIMIT - 1))


def _strong_probable_prime(n, a, d, s):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n, seed=0):
    """Miller-Rabin: deterministic below 3.3e24, 40 seeded random rounds above."""
    n = int(n)
    if n < 2:
        return False
    for p in _BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < DETERMINISTIC_LIMIT:
        return all(_strong_probable_prime(n, a, d, s) for a in _BASES)
    rng = random.Random(seed ^ n)
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1), d, s)
               for _ in range(RANDOM_ROUNDS))


def pollard_rho(n, budget=RHO_BUDGET, seed=0):
    """A nontrivial factor of the odd composite n, by Brent's cycle search."""
    rng = random.Random(seed ^ n)
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            # the batch overshot; step back one at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorizationBudgetError(n)


def factorize(n, budget=RHO_BUDGET, seed=0):
    """Prime factorisation of |n| as a Counter {prime: exponent}."""
    n = abs(int(n))
    if n == 0:
        raise DomainError("0 has no factorisation")
    out = Counter()
    for p in _small_primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] += 1
            n //= p
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(m, seed):
            # every cofactor below TRIAL_LIMIT^2 left after trial division is prime
            out[m] += 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d = pollard_rho(m, budget, seed)
        stack.extend((d, m // d))
    return out


def omega_with_multiplicity(n, budget=RHO_BUDGET, seed=0):
    """Omega(|n|), the number of prime factors counted with multiplicity."""
    return sum(factorize(n, budget, seed).values())


def reconstruct(factors):
    out = 1
    for p, e in factors.items():
        out *= p ** e
    return out
