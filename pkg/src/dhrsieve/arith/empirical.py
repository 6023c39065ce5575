"""Desk-scale counts of primes p in (x, 2x] with Omega(H(p)) <= r, and W(A)."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from ..exceptions import DomainError, FactorizationBudgetError, HypothesisError, InputError
from ..numerics import log_integral
from .density import density_sum
from .factor import RHO_BUDGET, factorize
from .polynomial import as_system
from .primes import iter_prime_segments, primes_in_range
from .roots import check_hypothesis

MAX_X = 10 ** 7


@dataclass(frozen=True)
class EmpiricalReport:
    x: int
    window: tuple
    prime_count: int
    r: int
    almost_prime_count: int
    density_ratio: float
    normalized_count: float
    omega_histogram: dict = field(default_factory=dict)
    factorizations: list = field(default_factory=list)

    def __post_init__(self):
        if not 0 <= self.almost_prime_count <= self.prime_count:
            raise ValueError("almost_prime_count must lie in [0, prime_count]")

    def to_dict(self):
        d = asdict(self)
        d["window"] = list(self.window)
        d["omega_histogram"] = {str(k): v for k, v in sorted(self.omega_histogram.items())}
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        """One summary row; factorizations are left to the JSON form."""
        keys = ["x", "window_lo", "window_hi", "prime_count", "r", "almost_prime_count",
                "density_ratio", "normalized_count"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        w.writerow([self.x, self.window[0], self.window[1], self.prime_count, self.r,
                    self.almost_prime_count, repr(self.density_ratio),
                    repr(self.normalized_count)])
        return buf.getvalue()


def _omega_block(args):
    """Omega(H(p)) for a block of primes; H(p) is factored one factor at a time."""
    system, primes, budget, seed, keep = args
    omegas, facts = [], []
    for p in primes:
        merged = Counter()
        for value in system.factor_values(p):
            try:
                merged.update(factorize(value, budget, seed))
            except FactorizationBudgetError as exc:
                raise FactorizationBudgetError(
                    exc.n, f"factorization budget exceeded for H({p}) at factor {exc.n}") from exc
        omegas.append(sum(merged.values()))
        if keep:
            facts.append({"p": p, "n": str(system(p)),
                          "factors": {str(q): e for q, e in sorted(merged.items())}})
    return omegas, facts


def _blocks(x, size):
    for seg in iter_prime_segments(x + 1, 2 * x + 1, segment=size):
        yield [int(p) for p in seg]


def omega_values(H, x, workers=1, budget=RHO_BUDGET, seed=0, keep=False, block=4096):
    """Omega(H(p)) for primes p in (x, 2x], blocks reduced in ascending order."""
    system = as_system(H)
    jobs = [(system, b, budget, seed, keep) for b in _blocks(x, block) if b]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_omega_block, jobs))
    else:
        parts = [_omega_block(j) for j in jobs]
    omegas, facts = [], []
    for o, f in parts:
        omegas.extend(o)
        facts.extend(f)
    return omegas, facts


def count_almost_primes(H, x, r, workers=1, budget=RHO_BUDGET, seed=0,
                        include_factorizations=False):
    """Count primes p in (x, 2x] with Omega(H(p)) <= r."""
    system = as_system(H)
    x, r = int(x), int(r)
    if not 2 <= x <= MAX_X:
        raise DomainError(f"x = {x} outside [2, {MAX_X}]")
    if r < 0:
        raise InputError("r must be non-negative")
    report = check_hypothesis(system)
    if not report.passed:
        raise HypothesisError(f"rho1(p) >= p - 1 at p in {sorted(report.witnesses)}")
    omegas, facts = omega_values(system, x, workers, budget, seed, include_factorizations)
    hist = Counter(omegas)
    count = sum(1 for w in omegas if w <= r)
    logx = math.log(x)
    return EmpiricalReport(
        x=x, window=(x, 2 * x), prime_count=len(omegas), r=r,
        almost_prime_count=count,
        density_ratio=density_sum(system, x).ratio,
        normalized_count=count / (x / logx ** (system.g + 1)),
        omega_histogram=dict(hist),
        factorizations=facts,
    )


@dataclass(frozen=True)
class WeightedSum:
    """W(A) with both sides of the Richert inequality for inspection."""

    X: float
    z: float
    y: float
    r: int
    eta: float
    W: float
    survivors: int
    almost_prime_count: int

    @property
    def scaled_count(self):
        """(r + 1) times the survivors with Omega <= r; compare with W."""
        return (self.r + 1) * self.almost_prime_count

    def to_dict(self):
        d = asdict(self)
        d["scaled_count"] = self.scaled_count
        return d


def weighted_sum_W(H, x, r, v, u):
    """W(A) = sum over n = H(p), (n, P(z)) = 1, of eta - sum_{z <= q < y, q | n} (1 - log q / log y).

    X = li(x), z = X^(1/v), y = X^(1/u).  Each prime q is counted once.
    """
    system = as_system(H)
    x = int(x)
    if not 2 <= x <= MAX_X:
        raise DomainError(f"x = {x} outside [2, {MAX_X}]")
    if not v > u > 0:
        raise DomainError("need v > u > 0 so that z < y")
    g, k = system.g, system.k
    eta = r + 1 - g * k * u
    if eta <= 0:
        raise DomainError(f"eta = r + 1 - gku = {eta:.6g} must be positive")
    X = log_integral(x)
    z, y = X ** (1.0 / v), X ** (1.0 / u)
    logy = math.log(y)
    below_z = [int(q) for q in primes_in_range(2, math.ceil(z))]
    band = [int(q) for q in primes_in_range(math.ceil(z), math.ceil(y))]
    total, survivors, small = 0.0, 0, 0
    for p in primes_in_range(x + 1, 2 * x + 1):
        vals = system.factor_values(int(p))
        if any(h % q == 0 for q in below_z for h in vals):
            continue
        survivors += 1
        weight = eta
        for q in band:
            if any(h % q == 0 for h in vals):
                weight -= 1.0 - math.log(q) / logy
        total += weight
        omega = sum(sum(factorize(h).values()) for h in vals)
        if omega <= r:
            small += 1
    return WeightedSum(X, z, y, int(r), eta, total, survivors, small)
