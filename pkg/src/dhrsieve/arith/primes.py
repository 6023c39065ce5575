"""Segmented sieve of Eratosthenes over numpy byte arrays."""
from __future__ import annotations

import math

import numpy as np

SEGMENT = 1 << 18


def _base_primes(limit):
    """Primes <= limit by a plain sieve; limit stays small (a square root)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mark[p]:
            mark[p * p::p] = False
    return np.flatnonzero(mark).astype(np.int64)


def iter_prime_segments(lo, hi, segment=SEGMENT):
    """Yield arrays of the primes in [lo, hi), one array per segment."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return
    base = _base_primes(math.isqrt(hi - 1))
    for start in range(lo, hi, segment):
        stop = min(start + segment, hi)
        mark = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            mark[first - start::p] = False
        yield np.flatnonzero(mark).astype(np.int64) + start


def primes_in_range(lo, hi):
    """Primes p with lo <= p < hi."""
    parts = list(iter_prime_segments(lo, hi))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def primes_up_to(n):
    """Primes p <= n."""
    return primes_in_range(2, int(n) + 1)


def prime_count(n):
    return sum(len(seg) for seg in iter_prime_segments(2, int(n) + 1))
