"""Integer polynomials in one variable and the product system H = h_1 ... h_g."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..exceptions import InputError

log = logging.getLogger(__name__)

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+)?\s*
        (?:\*?\s*(?P<var>[a-zA-Z])\s*(?:(?:\^|\*\*)\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial; ``coeffs[i]`` multiplies n^i, no trailing zeros."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, n):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * n + a
        return acc

    def __mul__(self, other):
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def mod(self, p):
        return tuple(a % p for a in self.coeffs)

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mag = abs(a)
            body = "n" if i == 1 else f"n^{i}" if i > 1 else ""
            text = body if mag == 1 and body else f"{mag}{body}"
            terms.append(("-" if a < 0 else "+", text))
        if not terms:
            return "0"
        sign, first = terms[0]
        out = ("-" if sign == "-" else "") + first
        return out + "".join(f" {s} {t}" for s, t in terms[1:])


def parse_polynomial(text):
    """Parse e.g. ``"n^3 + 2"``, ``"-2*n^2+n-7"`` or ``"3x**2"``."""
    s = text.strip()
    if not s:
        raise InputError("empty polynomial")
    coeffs = {}
    var = None
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise InputError(f"cannot parse polynomial {text!r} at position {pos}")
        sign, coef, v, exp = m.group("sign", "coef", "var", "exp")
        if coef is None and v is None:
            raise InputError(f"dangling sign in {text!r}")
        if sign is None and not first:
            raise InputError(f"missing operator before term at position {pos} in {text!r}")
        if v is not None:
            if var is None:
                var = v
            elif v != var:
                raise InputError(f"polynomial {text!r} mixes variables {var} and {v}")
        elif exp is not None:
            raise InputError(f"exponent without variable in {text!r}")
        power = 0 if v is None else int(exp) if exp is not None else 1
        value = int(coef) if coef is not None else 1
        coeffs[power] = coeffs.get(power, 0) + (-value if sign == "-" else value)
        pos = m.end()
        first = False
    deg = max(coeffs)
    return Polynomial(tuple(coeffs.get(i, 0) for i in range(deg + 1)))


@dataclass(frozen=True)
class PolynomialSystem:
    """Distinct polynomials h_1..h_g of common degree k; H is their product."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise InputError("a polynomial system needs at least one factor")
        degrees = {h.degree for h in factors}
        if min(degrees) < 1:
            raise InputError("every factor must have degree at least 1")
        if len(degrees) != 1:
            raise InputError(f"factors must share one degree, got {sorted(degrees)}")
        if len(set(factors)) != len(factors):
            raise InputError("factors must be pairwise distinct")

    @property
    def g(self):
        return len(self.factors)

    @property
    def k(self):
        return self.factors[0].degree

    @property
    def degree(self):
        return self.g * self.k

    @cached_property
    def H(self):
        out = Polynomial((1,))
        for h in self.factors:
            out = out * h
        return out

    @property
    def H0(self):
        return self.H(0)

    def __call__(self, n):
        return self.H(n)

    def factor_values(self, n):
        return [h(n) for h in self.factors]

    def __str__(self):
        return "; ".join(str(h) for h in self.factors)


def parse_polynomial_system(text, assume_irreducible=False):
    """Parse ``"n^3+2; n^3+6"``.  Without ``assume_irreducible`` the factors
    are screened heuristically and failures are logged as warnings."""
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise InputError("no polynomials given")
    system = PolynomialSystem(tuple(parse_polynomial(p) for p in parts))
    if not assume_irreducible:
        for msg in irreducibility_screen(system):
            log.warning("%s", msg)
    return system


def as_system(H):
    if isinstance(H, PolynomialSystem):
        return H
    if isinstance(H, Polynomial):
        return PolynomialSystem((H,))
    if isinstance(H, str):
        return parse_polynomial_system(H, assume_irreducible=True)
    raise InputError(f"expected a polynomial system, got {type(H).__name__}")


def _divisors(n):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(h):
    """Rational roots of an integer polynomial (rational root theorem)."""
    c = h.coeffs
    shift = next(i for i, a in enumerate(c) if a != 0)
    roots = {Fraction(0)} if shift else set()
    trimmed = Polynomial(c[shift:])
    if trimmed.degree < 1:
        return sorted(roots)
    a0, an = trimmed.coeffs[0], trimmed.leading
    if abs(a0) > 10 ** 12 or abs(an) > 10 ** 12:
        raise InputError("coefficients too large for the rational root screen")
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                num = sum(a * cand ** i for i, a in enumerate(trimmed.coeffs))
                if num == 0:
                    roots.add(cand)
    return sorted(roots)


def irreducibility_screen(system, prime_limit=500):
    """Necessary-condition checks for irreducibility; returns warning strings.

    Degree k <= 3 factors must have no rational root.  For k >= 2 some prime
    p <= ``prime_limit`` must leave the factor without a root mod p.  Passing
    the screen does not prove irreducibility.
    """
    from .primes import primes_up_to
    from .roots import root_count_mod_p

    warnings = []
    primes = [int(p) for p in primes_up_to(prime_limit)]
    for h in system.factors:
        if h.degree <= 3 and h.degree >= 2:
            try:
                roots = rational_roots(h)
            except InputError as exc:
                warnings.append(f"{h}: {exc}")
                roots = []
            if roots:
                warnings.append(f"{h} has rational root {roots[0]} and is reducible")
                continue
        if h.degree >= 2:
            rootless = sum(1 for p in primes if root_count_mod_p(h.coeffs, p) == 0)
            if rootless == 0:
                warnings.append(f"{h} has a root modulo every prime up to {prime_limit}")
    return warnings
