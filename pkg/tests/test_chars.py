from math import gcd

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from eisensign.chars import (DirichletCharacter, FundamentalDiscriminant, char_from_discriminant,
                             character_group, enumerate_fundamental, fundamental_discriminants,
                             induce, is_fundamental, jacobi, kronecker, multiply,
                             primitive_characters)
from eisensign.errors import CharacterError, NotFundamentalError


def legendre_brute(a, p):
    """(a/p) for odd prime p from the list of squares."""
    a %= p
    if a == 0:
        return 0
    return 1 if a in {x * x % p for x in range(1, p)} else -1


def kronecker_brute(D, n):
    """Kronecker symbol from prime factorisation and the defining table at 2 and -1."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    out = 1
    if n < 0:
        out = -1 if D < 0 else 1
        n = -n
    for p, e in sympy.factorint(n).items():
        if p == 2:
            v = 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
        else:
            v = legendre_brute(D, p)
        out *= v**e
    return out


def fundamental_brute(D):
    if D == 1:
        return True
    if D % 4 == 1:
        return sympy.factorint(abs(D)) and all(e == 1 for e in sympy.factorint(abs(D)).values())
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and all(e == 1 for e in sympy.factorint(abs(m)).values())
    return False


@given(st.integers(-500, 500), st.integers(-200, 200))
def test_kronecker_matches_factorisation_oracle(D, n):
    assert kronecker(D, n) == kronecker_brute(D, n)


@given(st.integers(-1000, 1000), st.integers(1, 999).filter(lambda n: n % 2))
def test_jacobi_matches_sympy(a, n):
    assert jacobi(a, n) == sympy.jacobi_symbol(a % n, n)


def test_fundamental_predicate_matches_definition():
    for D in range(-400, 401):
        if D == 0:
            continue
        assert is_fundamental(D) == bool(fundamental_brute(D)), D


def test_fundamental_examples():
    assert [D for D in range(1, 30) if is_fundamental(D)] == [1, 5, 8, 12, 13, 17, 21, 24, 28, 29]
    assert not is_fundamental(9)
    with pytest.raises(NotFundamentalError, match="9 is not a fundamental discriminant"):
        char_from_discriminant(9)
    with pytest.raises(NotFundamentalError):
        FundamentalDiscriminant(-8, real_quadratic=True)


@pytest.mark.parametrize("segment", [7, 64, 1 << 20])
def test_enumeration_is_segment_independent(segment):
    expected = [D for D in range(2, 3001) if fundamental_brute(D)]
    assert enumerate_fundamental(3000, segment=segment).tolist() == expected
    assert enumerate_fundamental(3000, include_one=True, segment=segment)[0] == 1


def test_signed_list_sorted_by_abs():
    Ds = fundamental_discriminants(20)
    assert Ds[:4] == [1, -3, -4, 5]
    assert all(abs(a) <= abs(b) for a, b in zip(Ds, Ds[1:]))
    assert all(is_fundamental(D) for D in Ds) and 9 not in Ds


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 8, 12, 15, 16, 21, 24, 40])
def test_character_group_size_and_orthogonality(N):
    G = character_group(N)
    assert len(G) == sympy.totient(N)
    assert len(set(G)) == len(G)
    for chi in G:
        s = sum((chi(a) for a in range(N)), 0)
        assert s == (sympy.totient(N) if chi.is_principal else 0)


@pytest.mark.parametrize("N", range(1, 41))
def test_primitive_count_matches_mobius_convolution(N):
    # number of primitive characters mod N is sum_{d | N} mu(d) phi(N/d)
    expected = sum(sympy.mobius(d) * sympy.totient(N // d) for d in sympy.divisors(N))
    assert len(primitive_characters(N)) == expected


@given(st.sampled_from([3, 5, 7, 8, 9, 12, 13, 16, 20, 21]), st.data())
def test_characters_are_multiplicative(N, data):
    chi = data.draw(st.sampled_from(character_group(N)))
    a, b = data.draw(st.integers(0, 200)), data.draw(st.integers(0, 200))
    assert chi(a * b) == chi(a) * chi(b)
    assert chi(a + N) == chi(a)


def conductor_brute(chi):
    N = chi.modulus
    for f in sympy.divisors(N):
        ok = all(chi(a) == 1 for a in range(1, N) if gcd(a, N) == 1 and (a - 1) % f == 0)
        if ok:
            return f


@pytest.mark.parametrize("N", [4, 8, 9, 12, 15, 16, 20, 24, 28])
def test_conductor_matches_brute_force(N):
    for chi in character_group(N):
        assert chi.conductor == conductor_brute(chi)
        assert chi.primitive_part().modulus == chi.conductor
        assert chi.primitive_part().induce(N) == chi


@pytest.mark.parametrize("D", [-4, -3, 5, 8, -8, 12, -7, 13, 24, -20, 40, 1])
def test_quadratic_from_discriminant(D):
    chi = char_from_discriminant(D)
    assert chi.conductor == abs(D) and chi.is_primitive
    assert chi.parity == (1 if D > 0 else -1)
    assert chi.discriminant() == D
    assert all(chi(n) == kronecker(D, n) for n in range(1, 200))
    assert DirichletCharacter.parse(str(chi)) == chi


def test_string_roundtrip_general():
    for chi in character_group(20):
        assert DirichletCharacter.parse(str(chi)) == chi


def test_parse_rejects_non_homomorphism():
    with pytest.raises(CharacterError):
        DirichletCharacter.parse("mod:5:[(1,1,0),(2,4,1),(3,4,1),(4,2,1)]")


def test_product_and_induction():
    a, b = char_from_discriminant(5), char_from_discriminant(8)
    assert multiply(a, b).primitive_part() == char_from_discriminant(40)
    assert multiply(a, a).is_principal
    assert induce(a, 15)(3) == 0 and induce(a, 15)(2) == -1


def test_table_and_angles():
    chi = char_from_discriminant(-4)
    assert chi.table.tolist() == [0, 1, 0, -1]
    assert np.array_equal(chi.angles(4), np.array([-1, 0, -1, 2]))


def test_galois_conjugate_order_four():
    chi = [c for c in primitive_characters(5) if c.order == 4][0]
    assert chi.galois_conjugate(3) == chi.conjugate()
    assert chi(2) * chi.conjugate()(2) == 1
