import logging
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from dhrsieve.arith import Polynomial, PolynomialSystem, parse_polynomial, parse_polynomial_system
from dhrsieve.arith.polynomial import as_system, irreducibility_screen, rational_roots
from dhrsieve.exceptions import InputError


@pytest.mark.parametrize("text, coeffs", [
    ("n^3+2", (2, 0, 0, 1)),
    ("n^3 + 6", (6, 0, 0, 1)),
    ("-2*n^2+n-7", (-7, 1, -2)),
    ("3x**2", (0, 0, 3)),
    ("n", (0, 1)),
    ("n^2 + n^2 + 1", (1, 0, 2)),
    ("12345678901234567890n + 1", (1, 12345678901234567890)),
])
def test_parse_polynomial(text, coeffs):
    assert parse_polynomial(text).coeffs == coeffs


@pytest.mark.parametrize("text", ["", "n^", "n^2 +", "2 n^2 3", "n^2 + m", "^3", "n^2 ++ 1"])
def test_parse_polynomial_errors(text):
    with pytest.raises(InputError):
        parse_polynomial(text)


def test_system_basic():
    s = parse_polynomial_system("n^3+2; n^3+6")
    assert (s.g, s.k, s.degree, s.H0) == (2, 3, 6, 12)
    assert s(11) == 1333 * 1337 == 1782221
    assert s.factor_values(11) == [1333, 1337]
    assert str(s) == "n^3 + 2; n^3 + 6"


def test_single_factor():
    s = parse_polynomial_system("n^2+1")
    assert (s.g, s.k) == (1, 2)


@pytest.mark.parametrize("text", ["n^2+1; n^3+2", "n^2+1; n^2+1", "", " ; ", "5"])
def test_system_errors(text):
    with pytest.raises(InputError):
        parse_polynomial_system(text)


def test_as_system():
    s = as_system("n^2+1")
    assert isinstance(s, PolynomialSystem)
    assert as_system(s) is s
    assert as_system(Polynomial((1, 0, 1))) == s
    with pytest.raises(InputError):
        as_system(42)


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=6),
       st.lists(st.integers(-50, 50), min_size=2, max_size=6), st.integers(-100, 100))
def test_product_evaluates_pointwise(a, b, n):
    p, q = Polynomial(tuple(a)), Polynomial(tuple(b))
    if not p.coeffs or not q.coeffs:
        return
    assert (p * q)(n) == p(n) * q(n)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5).filter(lambda c: any(c)))
def test_str_round_trip(c):
    p = Polynomial(tuple(c))
    assert parse_polynomial(str(p)) == p


def test_rational_roots_against_sympy():
    for text in ("n^2-1", "2n^2-3n+1", "n^3+2", "n^3-8", "6n^3-11n^2+6n-1", "n^2+n"):
        p = parse_polynomial(text)
        n = sympy.Symbol("n")
        expr = sum(c * n ** i for i, c in enumerate(p.coeffs))
        ref = sorted(Fraction(int(r.p), int(r.q)) for r in sympy.roots(sympy.Poly(expr, n))
                     if r.is_rational)
        assert rational_roots(p) == ref


def test_screen_flags_reducible(caplog):
    with caplog.at_level(logging.WARNING):
        parse_polynomial_system("n^2-1; n^2+1")
    assert any("rational root" in r.message for r in caplog.records)
    assert irreducibility_screen(parse_polynomial_system("n^3+2; n^3+6",
                                                         assume_irreducible=True)) == []


def test_screen_never_blocks():
    s = parse_polynomial_system("n^2-4; n^2+3n+2")
    assert s.g == 2
