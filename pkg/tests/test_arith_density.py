import itertools
import json
import math

import pytest
import sympy

from dhrsieve.arith import (V_product, Vprime_product, count_almost_primes, density_sum,
                            mertens_ratio, parse_polynomial_system, rho1, weighted_sum_W)
from dhrsieve.arith.empirical import omega_values
from dhrsieve.exceptions import DegeneratePrimeError, DomainError, HypothesisError, InputError
from dhrsieve.numerics import log_integral


def test_density_single_term(H):
    s = density_sum(H, 2)
    assert s.phi_sum == rho1(H, 2) / 1 * math.log(2) == 0.0
    assert s.rho2_sum == pytest.approx(1 / 2 * math.log(2))


def test_density_against_direct_sum(H):
    x = 3000
    ref = math.fsum(rho1(H, p) / (p - 1) * math.log(p) for p in sympy.primerange(2, x + 1))
    assert density_sum(H, x).phi_sum == pytest.approx(ref, rel=1e-13)


def test_density_ratios_at_a_million(H):
    s = density_sum(H, 10 ** 6)
    assert 0.85 <= s.ratio <= 1.15
    assert 0.85 <= s.rho2_ratio <= 1.15
    assert s.simple_sum < s.phi_sum


def test_density_increments_track_g_log(H):
    xs = [10 ** 7, 10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6]  # largest first fills the cache
    sums = {x: density_sum(H, x) for x in xs}
    for x1, x2 in itertools.combinations(sorted(xs), 2):
        gap = sums[x2].phi_sum - sums[x1].phi_sum - H.g * math.log(x2 / x1)
        assert abs(gap) <= 3 * H.g


def test_density_range(H):
    with pytest.raises(DomainError):
        density_sum(H, 1)
    with pytest.raises(DomainError):
        density_sum(H, 10 ** 8 + 1)


def test_V_single_factor(H):
    assert V_product(H, 3) == 1 - rho1(H, 2) / 1
    assert V_product(H, 5) == pytest.approx((1 - rho1(H, 2) / 1) * (1 - rho1(H, 3) / 2))
    assert Vprime_product(H, 3) == pytest.approx(1 - 1 / 2)


def test_mertens_ratio(H):
    assert 0.9 <= mertens_ratio(H, 10 ** 6) <= 1.1


def test_V_log_g_bounded_below(H):
    vals = [V_product(H, z) * math.log(z) ** H.g for z in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)]
    assert min(vals) > 0.5
    assert max(vals) / min(vals) < 1.5


def test_degenerate_prime():
    h = parse_polynomial_system("n^3+2; n^3+4", assume_irreducible=True)
    with pytest.raises(DegeneratePrimeError) as err:
        V_product(h, 100)
    assert err.value.p == 3


# -- empirical counts -------------------------------------------------------

@pytest.fixture(scope="module")
def report(H):
    return count_almost_primes(H, 10 ** 4, 15, include_factorizations=True)


def test_count_positive_and_sound(report, H):
    assert report.almost_prime_count >= 1
    assert report.prime_count == len(list(sympy.primerange(10 ** 4 + 1, 2 * 10 ** 4 + 1)))
    assert len(report.factorizations) == report.prime_count
    for rec in report.factorizations:
        prod = 1
        for q, e in rec["factors"].items():
            assert sympy.isprime(int(q))
            prod *= int(q) ** e
        assert prod == int(rec["n"]) == H(rec["p"])


def test_report_serialisation(report):
    doc = json.loads(report.to_json())
    assert doc["window"] == [10 ** 4, 2 * 10 ** 4]
    assert sum(doc["omega_histogram"].values()) == report.prime_count
    lines = report.to_csv().splitlines()
    assert lines[0].startswith("x,window_lo") and len(lines) == 2


def test_count_monotone_in_r(H):
    omegas, _ = omega_values(H, 2000)
    counts = [sum(w <= r for w in omegas) for r in range(0, 20)]
    assert counts[0] == 0
    assert all(a <= b for a, b in zip(counts, counts[1:]))
    assert count_almost_primes(H, 2000, 7).almost_prime_count == counts[7]


def test_count_r_zero(H):
    assert count_almost_primes(H, 500, 0).almost_prime_count == 0


def test_count_workers_deterministic(H):
    a = count_almost_primes(H, 20000, 9, workers=1)
    b = count_almost_primes(H, 20000, 9, workers=3)
    assert a.to_dict() == b.to_dict()


def test_count_rejects_bad_system():
    h = parse_polynomial_system("n^3+2; n^3+4", assume_irreducible=True)
    with pytest.raises(HypothesisError):
        count_almost_primes(h, 1000, 10)


def test_count_arguments(H):
    with pytest.raises(InputError):
        count_almost_primes(H, 1000, -1)
    with pytest.raises(DomainError):
        count_almost_primes(H, 10 ** 8, 5)


def test_W_bounded_by_eta_times_survivors(H):
    ws = weighted_sum_W(H, 5000, 15, 8.0, 1.5)
    assert ws.eta == pytest.approx(15 + 1 - 6 * 1.5)
    assert ws.W <= ws.eta * ws.survivors + 1e-9
    assert ws.X == pytest.approx(log_integral(5000))
    assert ws.z == pytest.approx(ws.X ** (1 / 8)) and ws.y == pytest.approx(ws.X ** (1 / 1.5))
    assert ws.to_dict()["scaled_count"] == 16 * ws.almost_prime_count


def test_W_positive_for_large_r(H):
    ws = weighted_sum_W(H, 3000, 200, 8.0, 1.5)
    assert ws.W > 0
    assert ws.survivors > 0


def test_W_needs_positive_eta(H):
    with pytest.raises(DomainError):
        weighted_sum_W(H, 3000, 5, 8.0, 1.5)
    with pytest.raises(DomainError):
        weighted_sum_W(H, 3000, 50, 1.5, 8.0)
