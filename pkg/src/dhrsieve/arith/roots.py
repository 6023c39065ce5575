"""Root counts rho, rho1, rho2 of H modulo d and the admissibility hypothesis."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import DomainError
from .polynomial import as_system
from .primes import primes_up_to

MAX_MODULUS = 10 ** 7
# below this every residue is tried directly
BRUTE_PRIME = 256
# keeps (p-1)^2 * deg inside int64 in the vectorised products
MAX_VECTOR_PRIME = 10 ** 8


def _residue_values(system, d):
    """H(a) mod d for a = 0..d-1, factor by factor in int64."""
    a = np.arange(d, dtype=np.int64)
    total = np.ones(d, dtype=np.int64) % d
    for h in system.factors:
        acc = np.zeros(d, dtype=np.int64)
        for c in reversed(h.coeffs):
            acc = (acc * a + (c % d)) % d
        total = (total * acc) % d
    return a, total


def _check_modulus(d):
    d = int(d)
    if not 1 <= d <= MAX_MODULUS:
        raise DomainError(f"modulus d = {d} outside [1, {MAX_MODULUS}]")
    return d


def rho(H, d):
    """#{a mod d : H(a) = 0 mod d}."""
    d = _check_modulus(d)
    _, vals = _residue_values(as_system(H), d)
    return int(np.count_nonzero(vals == 0))


def rho1(H, d):
    """#{a mod d : (a, d) = 1 and H(a) = 0 mod d}."""
    d = _check_modulus(d)
    a, vals = _residue_values(as_system(H), d)
    return int(np.count_nonzero((vals == 0) & (np.gcd(a, d) == 1)))


def rho2(H, d):
    """#{a mod d : a H(a) = 0 mod d}."""
    d = _check_modulus(d)
    a, vals = _residue_values(as_system(H), d)
    return int(np.count_nonzero((a * vals) % d == 0))


# ---------------------------------------------------------------------------
# prime moduli
# ---------------------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _rem(a, b, p):
    """a mod b over F_p; b has an invertible leading coefficient."""
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _gcd_degree(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _rem(a, b, p)
    return len(a) - 1


def _mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _rem(_trim(out), m, p)


def root_count_mod_p(coeffs, p):
    """Number of distinct roots of an integer polynomial modulo a prime p."""
    f = _trim([c % p for c in coeffs])
    if not f:
        return p
    if len(f) == 1:
        return 0
    if p <= BRUTE_PRIME:
        return sum(1 for a in range(p) if _eval_mod(f, a, p) == 0)
    # deg gcd(f, x^p - x)
    result, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            result = _mulmod(result, base, f, p)
        base = _mulmod(base, base, f, p)
        e >>= 1
    xp = result + [0] * max(0, 2 - len(result))
    xp[1] = (xp[1] - 1) % p
    xp = _trim(xp)
    if not xp:
        return len(f) - 1
    return _gcd_degree(f, xp, p)


def _eval_mod(f, a, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * a + c) % p
    return acc


def _vector_powx(h, primes):
    """x^p mod (monic h mod p) for every prime p, as an (N, d) array.

    ``h`` is an (N, d+1) array of coefficients reduced mod p with unit
    leading coefficient.
    """
    n, d = h.shape[0], h.shape[1] - 1
    P = primes[:, None]
    res = np.zeros((n, d), dtype=np.int64)
    res[:, 0] = 1
    top = int(primes.max()).bit_length()
    for bit in range(top - 1, -1, -1):
        # square
        prod = np.zeros((n, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            prod[:, i:i + d] = (prod[:, i:i + d] + res[:, i:i + 1] * res) % P
        for j in range(2 * d - 2, d - 1, -1):
            c = prod[:, j:j + 1]
            prod[:, j - d:j] = (prod[:, j - d:j] - c * h[:, :d]) % P
        res = prod[:, :d]
        # multiply by x where the bit is set
        on = ((primes >> bit) & 1).astype(bool)
        if on.any():
            c = res[:, d - 1:d]
            shifted = np.zeros_like(res)
            shifted[:, 1:] = res[:, :-1]
            shifted = (shifted - c * h[:, :d]) % P
            res = np.where(on[:, None], shifted, res)
    return res


def prime_root_counts(H, primes):
    """rho(p) for each prime in ``primes`` (an integer array)."""
    system = as_system(H)
    coeffs = system.H.coeffs
    primes = np.asarray(primes, dtype=np.int64)
    out = np.zeros(len(primes), dtype=np.int64)
    lead = system.H.leading
    small = (primes <= max(BRUTE_PRIME, system.degree)) | (lead % primes == 0)
    small |= primes > MAX_VECTOR_PRIME
    for i in np.flatnonzero(small):
        out[i] = root_count_mod_p(coeffs, int(primes[i]))
    idx = np.flatnonzero(~small)
    if len(idx) == 0:
        return out
    P = primes[idx]
    d = system.degree
    h = np.array([[c % int(p) for c in coeffs] for p in P], dtype=np.int64)
    inv = np.array([pow(int(lc), int(p) - 2, int(p)) for lc, p in zip(h[:, d], P)],
                   dtype=np.int64)
    h = (h * inv[:, None]) % P[:, None]
    xp = _vector_powx(h, P)
    xp[:, 1] = (xp[:, 1] - 1) % P
    for j, (row, hp, p) in enumerate(zip(xp, h, P)):
        r = [int(c) for c in row]
        if not any(r):
            out[idx[j]] = d
        else:
            out[idx[j]] = _gcd_degree([int(c) for c in hp], r, int(p))
    return out


@dataclass(frozen=True)
class PrimeRootTable:
    """rho, rho1 and rho2 at every prime up to ``limit``."""

    limit: int
    primes: np.ndarray
    rho: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray


_TABLES = {}


def prime_root_table(H, limit):
    """Cached root counts over the primes p <= limit."""
    system = as_system(H)
    limit = int(limit)
    for (sys_, lim), table in _TABLES.items():
        if sys_ == system and lim >= limit:
            keep = table.primes <= limit
            return PrimeRootTable(limit, table.primes[keep], table.rho[keep],
                                  table.rho1[keep], table.rho2[keep])
    primes = primes_up_to(limit)
    r = prime_root_counts(system, primes)
    h0 = system.H0
    zero_root = np.array([h0 % int(p) == 0 for p in primes], dtype=bool)
    r1 = r - zero_root
    # the roots of n H(n) mod p are 0 and the nonzero roots of H
    r2 = r1 + 1
    table = PrimeRootTable(limit, primes, r, r1, r2)
    _TABLES[(system, limit)] = table
    return table


@dataclass(frozen=True)
class HypothesisReport:
    passed: bool
    checked: tuple
    witnesses: dict = field(default_factory=dict)

    def to_dict(self):
        return {"passed": self.passed, "checked": list(self.checked),
                "witnesses": {str(p): v for p, v in self.witnesses.items()}}


def check_hypothesis(H):
    """rho1(p) < p - 1 at every prime p <= gk + 1.

    Larger primes pass automatically since rho1(p) <= deg H = gk < p - 1.
    """
    system = as_system(H)
    bound = system.degree + 1
    checked = [int(p) for p in primes_up_to(bound)] if bound >= 2 else []
    witnesses = {}
    for p in checked:
        r1 = rho1(system, p)
        if r1 >= p - 1:
            witnesses[p] = r1
    return HypothesisReport(not witnesses, tuple(checked), witnesses)

