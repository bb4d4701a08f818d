import math
from decimal import Decimal
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from eisensign.chars import char_from_discriminant, enumerate_fundamental, kronecker
from eisensign.eisen import newform_from_discriminants, sigma
from eisensign.stats import (SignPattern, average_eta, census, character_sum_primes, first_negative,
                             first_negative_scan, fundamental_count, kronecker_proportion, pair_count,
                             predicted_census, prime_race, prob_epsilon, sign_density, theta_constant,
                             theta_partial)

THETA = "3.9750223902667539847734759105"


def brute_pairs(x, include_one):
    Ds = enumerate_fundamental(x, include_one=include_one).tolist()
    return [(a, b) for a in Ds for b in Ds if a * b <= x]


def census_sign(D1, D2, p):
    return kronecker(D1, p) if D2 % p == 0 else kronecker(D2, p)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 101])
def test_probabilities_sum_to_one(p):
    assert sum(prob_epsilon(e, p) for e in (-1, 0, 1)) == 1
    assert prob_epsilon(1, p) == prob_epsilon(-1, p) == Fraction(p, 2 * p + 2)


def test_pattern_prediction_examples():
    assert predicted_census(SignPattern.parse("3:-1")) == Fraction(15, 32)
    assert predicted_census(SignPattern.parse("3:0")) == Fraction(1, 16)
    assert predicted_census(SignPattern.parse("3:1,5:0")) == Fraction(15, 32) * Fraction(1, 36)


def test_pattern_prediction_matches_pair_convolution():
    # sign at p is -1 when (D2/p) = -1, or p | D2 and (D1/p) = -1
    for p in (2, 3, 5, 7):
        q = prob_epsilon
        assert predicted_census(SignPattern(((p, -1),))) == q(-1, p) + q(0, p) * q(-1, p)
        assert predicted_census(SignPattern(((p, 0),))) == q(0, p) ** 2


def test_pattern_validation():
    for bad in ("5:1,3:1", "4:1", "3:2", "3:1,3:1"):
        with pytest.raises(ValueError):
            SignPattern.parse(bad)
    assert str(SignPattern.parse("3:-1,5:0")) == "3:-1,5:0"


@pytest.mark.parametrize("include_one", [False, True])
@pytest.mark.parametrize("x", [60, 500, 3000])
def test_pair_count_and_census_against_brute_force(x, include_one):
    pairs = brute_pairs(x, include_one)
    assert pair_count(x, include_one) == len(pairs)
    for text in ("3:-1", "3:0", "2:1,3:-1", "3:0,5:1,7:-1"):
        pattern = SignPattern.parse(text)
        hits = sum(all(census_sign(a, b, p) == e for p, e in pattern.entries) for a, b in pairs)
        r = census(pattern, x, include_one=include_one)
        assert (r.sample_size, r.hits) == (len(pairs), hits)


def test_census_is_thread_independent():
    pattern = SignPattern.parse("3:-1,5:1")
    reports = [census(pattern, 200_000, threads=t) for t in (1, 2, 4)]
    assert len({(r.sample_size, r.hits) for r in reports}) == 1


@pytest.mark.parametrize("include_one", [False, True])
def test_eta_against_brute_force(include_one):
    x = 2000
    total = resolved = 0
    ps = list(sympy.primerange(2, 98))
    for a, b in brute_pairs(x, include_one):
        hit = next((p for p in ps if census_sign(a, b, p) == -1), None)
        if hit:
            resolved += 1
            total += hit
    r = average_eta(x, include_one=include_one)
    assert r.resolved == resolved and r.eta_sum == total
    assert r.pairs == len(brute_pairs(x, include_one))
    if include_one:
        assert r.unresolved >= 1  # (1, 1) has no negative sign anywhere
    assert average_eta(x, include_one, threads=3) == r


def test_kronecker_proportion_against_brute_force():
    r = kronecker_proportion(-1, 3, 5000)
    Ds = enumerate_fundamental(5000).tolist()
    assert r.sample_size == len(Ds)
    assert r.hits == sum(kronecker(D, 3) == -1 for D in Ds)
    assert r.predicted == Fraction(3, 8)


def test_fundamental_count_normalisation():
    # real-quadratic fundamental discriminants up to x number about 3x / pi^2
    c = fundamental_count(10**6)
    assert abs(c["ratio"] - 3 / math.pi**2) < 2e-3
    assert abs(c["ratio"] - c["half_over_zeta2"]) < abs(c["ratio"] - c["one_over_zeta2"])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(1, 5, 2), (5, 8, 2), (1, -4, 3), (-3, 1, 3), (8, 12, 4), (-4, -3, 2)]),
       st.integers(50, 3000), st.sampled_from([-1, 1]))
def test_sign_density_against_brute_force(triple, x, s):
    D1, D2, k = triple
    c1, c2 = char_from_discriminant(D1), char_from_discriminant(D2)
    N = abs(D1 * D2)
    coprime = [n for n in range(1, x + 1) if math.gcd(n, N) == 1]
    hits = sum(1 for n in coprime if (sigma(c1, c2, k, n) > 0) - (sigma(c1, c2, k, n) < 0) == s)
    r = sign_density(c1, c2, k, x, sign=s)
    assert (r.sample_size, r.hits) == (len(coprime), hits)


def test_sign_density_thread_independent():
    c1, c2 = char_from_discriminant(5), char_from_discriminant(8)
    rs = {(r.sample_size, r.hits) for r in (sign_density(c1, c2, 2, 10**6, threads=t) for t in (1, 4))}
    assert len(rs) == 1


def test_first_negative_examples():
    E = newform_from_discriminants(1, 5, 2)
    assert first_negative(E.chi1, E.chi2, 2) == 2
    E = newform_from_discriminants(1, 8, 2)
    assert first_negative(E.chi1, E.chi2, 2) == 3
    with pytest.raises(Exception):
        first_negative(E.chi2, E.chi1, 2)


def test_first_negative_scan_matches_pointwise():
    scan = first_negative_scan(3000)
    for D, p0 in list(zip(scan["Ds"].tolist(), scan["p0"].tolist()))[::37]:
        c = char_from_discriminant(D)
        assert p0 == min(p for p in sympy.primerange(2, 200) if c(p) == -1)
    assert scan["argmax_D"] == 12


def test_theta_first_partial_sum():
    assert theta_partial(1) == Fraction(8, 9)


def prob_sign_minus(p):
    return p / (2 * p + 2) + p / (2 * (p + 1) ** 2)


def test_theta_summand_forms_agree():
    # summand p * P(sign -1 at p) and survival factor 1 - P(sign -1 at p)
    p = sympy.symbols("p", positive=True)
    assert sympy.simplify(p**2 * (p + 2) / (2 * (p + 1) ** 2) - p * prob_sign_minus(p)) == 0
    assert sympy.simplify((2 + p * (p + 2)) / (2 * (p + 1) ** 2) - (1 - prob_sign_minus(p))) == 0
    assert sympy.simplify(prob_sign_minus(p) - (1 - predicted_minus_complement(p))) == 0


def predicted_minus_complement(p):
    # sign is +1 or 0 at p: everything except the -1 census cell
    q1, q0 = p / (2 * p + 2), 1 / (p + 1)
    return q1 + q0 * (q1 + q0)


def test_theta_constant_digits():
    v = theta_constant(200, digits=30)
    assert abs(v - Decimal(THETA)) < Decimal("1e-27")
    assert str(theta_constant(400, digits=30))[:29] == THETA[:29]


def test_prime_race_against_brute_force():
    chi = char_from_discriminant(5)
    race = prime_race(chi, 10_000, points=50)
    for y, s in race["series"][::7]:
        assert s == sum(chi(p) for p in sympy.primerange(2, y + 1))
    assert character_sum_primes(chi, 1000) == sum(chi(p) for p in sympy.primerange(2, 1001))


def test_prime_race_small_values():
    chi = char_from_discriminant(5)
    assert character_sum_primes(chi, 10) == -3
    assert character_sum_primes(chi, 1) == 0
    race = prime_race(chi, 10**5, points=100)
    assert race["predicted_bias"] > Fraction(1, 2)  # leading term of an asymptotic law, may exceed 1
    with pytest.raises(Exception):
        prime_race(char_from_discriminant(1), 100)
