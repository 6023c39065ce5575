"""Density sums and the products V(z), V'(z)."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..exceptions import DegeneratePrimeError, DomainError
from ..sievefn import E_GAMMA
from .polynomial import as_system
from .roots import prime_root_table

MAX_X = 10 ** 8
MAX_Z = 10 ** 7


@dataclass(frozen=True)
class DensitySums:
    """Sums over p <= x of rho1(p)/phi(p) log p, rho1(p)/p log p and rho2(p)/p log p."""

    x: int
    g: int
    phi_sum: float
    simple_sum: float
    rho2_sum: float

    @property
    def ratio(self):
        return self.phi_sum / (self.g * math.log(self.x))

    @property
    def simple_ratio(self):
        return self.simple_sum / (self.g * math.log(self.x))

    @property
    def rho2_ratio(self):
        return self.rho2_sum / ((self.g + 1) * math.log(self.x))

    def to_dict(self):
        d = asdict(self)
        d.update(ratio=self.ratio, simple_ratio=self.simple_ratio, rho2_ratio=self.rho2_ratio)
        return d


def density_sum(H, x):
    system = as_system(H)
    x = int(x)
    if not 2 <= x <= MAX_X:
        raise DomainError(f"x = {x} outside [2, {MAX_X}]")
    t = prime_root_table(system, x)
    p = t.primes.astype(float)
    logp = np.log(p)
    return DensitySums(
        x, system.g,
        math.fsum(t.rho1 / (p - 1.0) * logp),
        math.fsum(t.rho1 / p * logp),
        math.fsum(t.rho2 / p * logp),
    )


def _product(primes, numer, denom, label):
    factors = 1.0 - numer / denom
    bad = np.flatnonzero(factors <= 0)
    if len(bad):
        raise DegeneratePrimeError(int(primes[bad[0]]),
                                   f"{label} factor at p = {int(primes[bad[0]])} is not positive")
    return math.exp(math.fsum(np.log(factors)))


def _table_below(system, z):
    z = int(math.ceil(z))
    if not 2 <= z <= MAX_Z:
        raise DomainError(f"z = {z} outside [2, {MAX_Z}]")
    t = prime_root_table(system, z - 1)
    return t


def V_product(H, z):
    """prod_{p < z} (1 - rho1(p)/phi(p))."""
    t = _table_below(as_system(H), z)
    return _product(t.primes, t.rho1, t.primes - 1.0, "V")


def Vprime_product(H, z):
    """prod_{p < z} (1 - rho2(p)/p)."""
    t = _table_below(as_system(H), z)
    return _product(t.primes, t.rho2, t.primes.astype(float), "V'")


def mertens_ratio(H, z):
    """V'(z) e^gamma log z / V(z), which tends to 1."""
    return Vprime_product(H, z) * E_GAMMA * math.log(z) / V_product(H, z)
