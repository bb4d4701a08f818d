import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from eisensign.chars import (DirichletCharacter, char_from_discriminant, character_group,
                             primitive_characters)
from eisensign.cyclotomic import CyclotomicNumber, exact
from eisensign.decomp import (ShiftedNewformCombination, coefficient_field, combination, decompose,
                              eisenstein_dimension, galois_conjugate_form, newform_basis,
                              nonnegativity_scan, rational_structure, scan_bound, shift, trace)
from eisensign.eisen import QExpansion, make_newform, newform_from_discriminants, q_expansion
from eisensign.errors import (DecompositionError, HypothesisViolationError, NonRationalError,
                              NonRealCharacterError, NotInSpaceError, UnderdeterminedError)
from eisensign.linalg import rank

E = newform_from_discriminants
ONE = DirichletCharacter.principal()
SPACES = [(N, chi, k) for N in (1, 3, 4, 5, 8, 12) for chi in character_group(N)
          if chi.is_quadratic for k in (2, 3, 4) if chi.parity == (-1) ** k]


def test_basis_examples():
    assert list(newform_basis(1, ONE, 4)) == [(E(1, 1, 4), 1)]
    b = newform_basis(4, ONE.induce(4), 4)
    assert sorted(d for F, d in b if F == E(1, 1, 4)) == [1, 2, 4]
    assert len(b) == 3


def test_basis_notes():
    assert newform_basis(1, ONE, 2).note == "only the excluded level-1 weight-2 form"
    assert "parity mismatch" in newform_basis(4, ONE.induce(4), 3).note


@pytest.mark.parametrize("N", range(1, 25))
@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_dimension_matches_independent_count(N, k):
    for chi in character_group(N):
        if chi.is_quadratic and chi.parity == (-1) ** k:
            assert len(newform_basis(N, chi, k)) == eisenstein_dimension(N, chi, k), (N, chi, k)


@pytest.mark.parametrize("N,chi,k", SPACES)
def test_basis_columns_are_independent(N, chi, k):
    basis = newform_basis(N, chi, k)
    if not basis:
        return
    B = len(basis) + 10
    cols = [shift(q_expansion(F, B), d).values() for F, d in basis]
    rows = [[Fraction(exact(c[n])) for c in cols] for n in range(B + 1)]
    assert rank(rows) == len(basis)


def test_shift_example():
    a = shift(q_expansion(E(1, 1, 4), 10), 2)
    assert a[6] == 28 and a[5] == 0 and a[0] == Fraction(1, 240)
    with pytest.raises(ValueError):
        shift(a, 0)


def test_decompose_examples():
    chi = ONE.induce(4)
    c = combination([(3, E(1, 1, 4), 1), (5, E(1, 1, 4), 2)], 4, chi, 4)
    back = decompose(c.evaluate(30), 4, chi, 4)
    assert back.as_dict() == {(E(1, 1, 4), 1): 3, (E(1, 1, 4), 2): 5}
    assert back.is_rational()


def random_comb(rng, N, chi, k):
    basis = newform_basis(N, chi, k)
    terms = [(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), F, d) for F, d in basis]
    terms = [t for t in terms if t[0]] or [(Fraction(1), *basis[0])]
    return combination(terms, N, chi, k)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([s for s in SPACES if newform_basis(*s)]), st.integers(0, 10**6))
def test_round_trip_is_exact(space, seed):
    N, chi, k = space
    c = random_comb(random.Random(seed), N, chi, k)
    a = c.evaluate(len(newform_basis(N, chi, k)) + 12)
    assert decompose(a, N, chi, k).as_dict() == c.as_dict()


def test_cyclotomic_round_trip():
    chi = [c for c in primitive_characters(7) if c.order == 3][0]
    N, k = 7, 2 if chi.parity == 1 else 3
    z = CyclotomicNumber.root(3)
    terms = [(z + 2, F, d) for F, d in newform_basis(N, chi, k)]
    c = combination(terms, N, chi, k)
    back = decompose(c.evaluate(len(terms) + 12), N, chi, k)
    assert back.as_dict() == c.as_dict()
    assert not back.is_rational()


def test_perturbation_and_short_input_rejected():
    chi = ONE.induce(4)
    a = combination([(1, E(1, 1, 4), 1)], 4, chi, 4).evaluate(20)
    bad = QExpansion(a.constant, a.coeffs[:-1] + (a.coeffs[-1] + 1,), 4, 4)
    with pytest.raises(NotInSpaceError):
        decompose(bad, 4, chi, 4)
    with pytest.raises(UnderdeterminedError):
        decompose(a.truncate(5), 4, chi, 4)
    floaty = QExpansion(0.5, a.coeffs, 4, 4)
    with pytest.raises(DecompositionError, match="floating-point"):
        decompose(floaty, 4, chi, 4)


def test_combination_validation():
    with pytest.raises(DecompositionError):
        combination([(1, E(1, 1, 4), 1), (2, E(1, 1, 4), 1)], 4, ONE, 4)
    with pytest.raises(DecompositionError):
        combination([(1, E(1, 5, 2), 3)], 10, char_from_discriminant(5), 2)


def test_json_round_trip():
    chi = ONE.induce(4)
    c = combination([(Fraction(3, 2), E(1, 1, 4), 1), (-2, E(1, 1, 4), 4)], 4, chi, 4)
    assert ShiftedNewformCombination.from_json(c.to_json(), 4, chi).as_dict() == c.as_dict()


# -- Galois structure ---------------------------------------------------------------

CUBIC7 = [c for c in primitive_characters(7) if c.order == 3][0]


def test_trace_is_rational_and_matches_orbit_sum():
    F = make_newform(CUBIC7, CUBIC7.conjugate(), 2)
    t = trace(1, F, 20)
    assert t.is_rational()
    G = galois_conjugate_form(F, 2)
    direct = [exact(u + v) for u, v in zip(q_expansion(F, 20).values(), q_expansion(G, 20).values())]
    assert t.values() == direct


def test_rational_structure_certifies_orbit():
    F = make_newform(CUBIC7, CUBIC7.conjugate(), 2)
    a = trace(CyclotomicNumber.root(3), F, 30)
    chi = ONE.induce(49)
    rs = rational_structure(a, 49, chi, 2)
    assert rs.certified and len(rs.orbits) == 1 and len(rs.orbits[0]) == 2
    with pytest.raises(NonRealCharacterError):
        rational_structure(a, 7, CUBIC7, 2)
    cyc = QExpansion(CyclotomicNumber.root(3), a.coeffs, 2, 49)
    with pytest.raises(NonRationalError):
        rational_structure(cyc, 49, chi, 2)


def test_coefficient_field_examples():
    q4 = [c for c in primitive_characters(5) if c.order == 4][0]
    r = coefficient_field(make_newform(ONE, q4, 3))
    assert (r.degree, r.classification) == (2, "CM")
    q5 = [c for c in primitive_characters(11) if c.order == 5][0]
    r = coefficient_field(make_newform(ONE, q5, 2))
    assert r.degree == 4
    assert coefficient_field(E(5, 8, 2)).classification == "rational"


def test_degree_need_not_divide_totient_of_level():
    # degree 4 from an order-5 character at level 11, while phi(11) = 10
    q5 = [c for c in primitive_characters(11) if c.order == 5][0]
    r = coefficient_field(make_newform(ONE, q5, 2))
    assert int(sympy.totient(11)) % r.degree != 0


@pytest.mark.parametrize("N", [5, 7, 9, 11, 13, 15, 16, 20, 21])
def test_degree_divides_totient_of_exponent(N):
    lam = int(sympy.reduced_totient(N))
    for chi in primitive_characters(N):
        k = 2 if chi.parity == 1 else 3
        F = make_newform(ONE, chi, k)
        assert int(sympy.totient(lam)) % coefficient_field(F).degree == 0


def test_galois_conjugate_expansion_is_conjugated():
    q5 = [c for c in primitive_characters(11) if c.order == 5][0]
    F = make_newform(ONE, q5, 2)
    G = galois_conjugate_form(F, 2)
    a, b = q_expansion(F, 30).values(), q_expansion(G, 30).values()
    for u, v in zip(a[1:], b[1:]):
        u = exact(u)
        assert exact(v) == (exact(u.lift(5).galois(2)) if isinstance(u, CyclotomicNumber) else u)


# -- non-negativity ------------------------------------------------------------------

def test_scan_examples():
    c = combination([(1, E(5, 8, 2), 1)], 40, char_from_discriminant(40), 2)
    assert nonnegativity_scan(c, 0, 100) == (3, -4)
    assert nonnegativity_scan(c, 0, 100, full_scan=True) == (2, -1)
    assert nonnegativity_scan(c, 100, 1000) == (107, -108)
    assert scan_bound(c, 100) is not None


def test_scan_rejects_hypothesis_violations():
    for D1, D2 in ((1, 40), (40, 1)):
        c = combination([(1, E(D1, D2, 2), 1)], 40, char_from_discriminant(40), 2)
        with pytest.raises(HypothesisViolationError, match="hypothesis violated"):
            nonnegativity_scan(c, 0, 100)
    with pytest.raises(ValueError):
        nonnegativity_scan(combination([(1, E(5, 8, 2), 1)], 40, char_from_discriminant(40), 2), -1, 10)


def test_principal_chi1_combination_can_stay_non_negative():
    # the chi1-principal reading of the hypothesis admits non-negative
    # combinations: E(chi_D, chi0, k) itself, and 3 E - (9/2) E|B_2 for D = 8
    F = E(8, 1, 4)
    ex = q_expansion(F, 300)
    assert all(v >= 0 for v in ex.coeffs)
    c = combination([(3, F, 1), (Fraction(-9, 2), F, 2)], 16, char_from_discriminant(8), 4)
    assert all(v >= 0 for v in c.evaluate(300).coeffs)


QUADS = [-3, -4, 5, -7, 8, -8, 12, 13, -15, 17, -19, -20, 21, 24]


@settings(max_examples=150)
@given(st.lists(st.sampled_from(QUADS), min_size=1, max_size=5, unique=True),
       st.lists(st.fractions(-10, 10, max_denominator=7), min_size=5, max_size=5))
def test_rational_combination_of_nonprincipal_characters_takes_a_negative_value(Ds, cs):
    chars = [char_from_discriminant(D) for D in Ds]
    cs = cs[:len(Ds)]
    if all(c == 0 for c in cs):
        return
    M = math.lcm(*(abs(D) for D in Ds))
    values = [sum(c * chi(r) for c, chi in zip(cs, chars)) for r in range(M) if math.gcd(r, M) == 1]
    assert min(values) < 0
