"""The Eisenstein space E_k(N, chi) as a span of shifted newforms.

A basis is given by the shifts E | B_d (a(n) -> a(n/d)) of the newforms
E(chi1, chi2, k) of level M = cond(chi1) cond(chi2) dividing N, for d | N/M,
with chi1 chi2 inducing chi.  The shift keeps the constant term.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import sympy

from .chars import DirichletCharacter, multiply, primitive_characters
from .cyclotomic import CyclotomicNumber, _totient, exact, format_exact, parse_exact
from .eisen import (EisensteinNewform, QExpansion, make_newform, newform_from_discriminants,
                    q_expansion, sigma)
from .errors import (DecompositionError, HypothesisViolationError, NonRationalError,
                     NonRealCharacterError, NotInSpaceError, UnderdeterminedError)
from .linalg import solve
from .primes import primes_upto

SLACK = 10


class Basis(list):
    """List of (newform, shift) pairs; `note` explains an empty space."""

    note: str = ""


def newform_basis(N: int, chi: DirichletCharacter, k: int) -> Basis:
    """Shifted newforms spanning E_k(N, chi), in a fixed canonical order."""
    if N % chi.modulus:
        raise ValueError(f"character modulus {chi.modulus} does not divide {N}")
    out = Basis()
    if k < 2:
        out.note = "weight below 2"
        return out
    if chi.parity != (-1) ** k:
        out.note = f"parity mismatch: chi(-1) = {chi.parity}, (-1)^k = {(-1) ** k}"
        return out
    target = chi.primitive_part()
    excluded = False
    for M in sympy.divisors(N):
        for M1 in sympy.divisors(M):
            M2 = M // M1
            for chi1 in primitive_characters(M1):
                for chi2 in primitive_characters(M2):
                    if chi1.parity * chi2.parity != chi.parity:
                        continue
                    if multiply(chi1, chi2).primitive_part() != target:
                        continue
                    if M == 1 and k == 2:
                        excluded = True
                        continue
                    E = make_newform(chi1, chi2, k)
                    out.extend((E, d) for d in sympy.divisors(N // M))
    if not out:
        out.note = ("only the excluded level-1 weight-2 form" if excluded
                    else "no newform pairs with this nebentypus")
    return out


def eisenstein_dimension(N: int, chi: DirichletCharacter, k: int) -> int:
    """Independent count for k >= 3: sum over d | N with gcd(d, N/d) | N/cond(chi) of phi(gcd)."""
    f = chi.conductor
    total = 0
    for d in sympy.divisors(N):
        g = gcd(d, N // d)
        if (N // f) % g == 0:
            total += int(sympy.totient(g))
    return total


def shift(a: QExpansion, d: int) -> QExpansion:
    """B_d: b(n) = a(n/d) when d | n, else 0; b(0) = a(0)."""
    if d < 1:
        raise ValueError("d must be positive")
    coeffs = tuple(a[n // d] if n % d == 0 else 0 for n in range(1, a.bound + 1))
    return QExpansion(a.constant, coeffs, a.k, a.level * d, a.chi)


# -- combinations -----------------------------------------------------------------

@dataclass(frozen=True)
class ShiftedNewformCombination:
    terms: tuple[tuple[object, EisensteinNewform, int], ...]
    N: int
    chi: DirichletCharacter
    k: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        seen = set()
        target = self.chi.primitive_part()
        for c, E, d in self.terms:
            key = (E, d)
            if key in seen:
                raise DecompositionError(f"repeated term {E} | B_{d}")
            seen.add(key)
            if self.N % (E.level * d):
                raise DecompositionError(f"{E} | B_{d} does not live at level {self.N}")
            if E.nebentypus.primitive_part() != target:
                raise DecompositionError(f"{E} has the wrong nebentypus")
            if E.k != self.k:
                raise DecompositionError(f"{E} has weight {E.k}, expected {self.k}")

    def as_dict(self) -> dict:
        return {(E, d): c for c, E, d in self.terms}

    def is_rational(self) -> bool:
        return all(not isinstance(exact(c), CyclotomicNumber) for c, _, _ in self.terms)

    def _expansion(self, E: EisensteinNewform, B: int) -> QExpansion:
        got = self._cache.get(E)
        if got is None or got.bound < B:
            got = q_expansion(E, B)
            self._cache[E] = got
        return got

    def evaluate(self, B: int) -> QExpansion:
        """q-expansion a(0..B) of the combination."""
        const = 0
        coeffs = [0] * B
        for c, E, d in self.terms:
            ex = self._expansion(E, max(B // d, 1))
            const = const + c * ex.constant
            for m in range(1, B // d + 1):
                v = ex[m]
                if v != 0:
                    coeffs[d * m - 1] = coeffs[d * m - 1] + c * v
        return QExpansion(exact(const), tuple(exact(v) for v in coeffs), self.k, self.N,
                          self.chi.induce(self.N))

    def coefficient(self, n: int):
        if n == 0:
            return exact(sum((c * E.coefficient(0) for c, E, _ in self.terms), 0))
        total = 0
        for c, E, d in self.terms:
            if n % d == 0:
                total = total + c * sigma(E.chi1, E.chi2, E.k, n // d)
        return exact(total)

    def to_list(self) -> list[dict]:
        out = []
        for c, E, d in self.terms:
            item = {"c": format_exact(c)}
            if E.is_quadratic:
                item.update(D1=E.chi1.discriminant(), D2=E.chi2.discriminant())
            else:
                item.update(chi1=str(E.chi1), chi2=str(E.chi2))
            item.update(k=E.k, d=d)
            out.append(item)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_list(cls, items: list[dict], N: int | None = None,
                  chi: DirichletCharacter | None = None) -> ShiftedNewformCombination:
        terms = []
        for item in items:
            k = int(item["k"])
            if "D1" in item:
                E = newform_from_discriminants(int(item["D1"]), int(item["D2"]), k)
            else:
                E = make_newform(DirichletCharacter.parse(item["chi1"]),
                                 DirichletCharacter.parse(item["chi2"]), k)
            terms.append((parse_exact(str(item["c"])), E, int(item["d"])))
        if not terms:
            raise DecompositionError("empty combination needs an explicit ambient space")
        if N is None:
            N = math.lcm(*(E.level * d for _, E, d in terms))
        if chi is None:
            chi = terms[0][1].nebentypus.induce(N)
        return cls(tuple(terms), N, chi, terms[0][1].k)

    @classmethod
    def from_json(cls, text: str, N: int | None = None, chi=None) -> ShiftedNewformCombination:
        return cls.from_list(json.loads(text), N, chi)


def combination(terms, N: int, chi: DirichletCharacter, k: int) -> ShiftedNewformCombination:
    return ShiftedNewformCombination(tuple((exact(c), E, d) for c, E, d in terms), N, chi, k)


# -- decomposition ----------------------------------------------------------------

def _check_exact(values) -> None:
    for v in values:
        if isinstance(v, float) or isinstance(v, complex):
            raise DecompositionError("floating-point coefficients are refused; pass exact values")
        if not isinstance(v, (int, Fraction, CyclotomicNumber)):
            raise DecompositionError(f"unsupported coefficient type {type(v).__name__}")


def _field_order(values) -> int:
    L = 1
    for v in values:
        v = exact(v)
        if isinstance(v, CyclotomicNumber):
            L = math.lcm(L, v.order)
    return L


def _coords(v, L: int) -> tuple[Fraction, ...]:
    return CyclotomicNumber.coerce(v).lift(L).coords


def decompose(a: QExpansion, N: int, chi: DirichletCharacter, k: int) -> ShiftedNewformCombination:
    """Unique coefficients c with a = sum c_i E_i | B_{d_i}, checked on every provided coefficient."""
    basis = newform_basis(N, chi, k)
    values = a.values()
    _check_exact(values)
    if not basis:
        if all(v == 0 for v in values):
            return combination((), N, chi, k)
        raise NotInSpaceError(f"not in the Eisenstein space at this level ({basis.note})")
    B = len(basis) + SLACK
    if a.bound < B:
        raise UnderdeterminedError(f"need at least {B} coefficients, got {a.bound}")
    cols = []
    for E, d in basis:
        cols.append(shift(q_expansion(E, B), d).values())
    L = math.lcm(_field_order(values[: B + 1]),
                 *(math.lcm(E.chi1.order, E.chi2.order) for E, _ in basis))
    L = CyclotomicNumber.root(L).order
    if L == 1:
        A = [[Fraction(col[n]) for col in cols] for n in range(B + 1)]
        sol = solve(A, [Fraction(exact(values[n])) for n in range(B + 1)])
        coeffs = [exact(x) for x in sol.x]
    else:
        # write each c_i in the power basis of Q(zeta_L) and solve over Q
        phi = _totient(L)
        powers = [CyclotomicNumber.root(L, j) for j in range(phi)]
        A, rhs = [], []
        for n in range(B + 1):
            block = [[] for _ in range(phi)]
            for col in cols:
                for z in powers:
                    cz = _coords(z * col[n], L)
                    for r in range(phi):
                        block[r].append(cz[r])
            A.extend(block)
            rhs.extend(_coords(values[n], L))
        sol = solve(A, rhs)
        coeffs = []
        for i in range(len(cols)):
            coeffs.append(exact(CyclotomicNumber(L, sol.x[i * phi:(i + 1) * phi])))
    terms = tuple((c, E, d) for c, (E, d) in zip(coeffs, basis) if c != 0)
    comb = combination(terms, N, chi, k)
    check = comb.evaluate(a.bound).values()
    for n, (u, v) in enumerate(zip(check, values)):
        if exact(u) != exact(v):
            raise NotInSpaceError(f"not in the Eisenstein space at this level (residual at n={n})")
    return comb


# -- Galois structure -------------------------------------------------------------

def _value_order(E: EisensteinNewform) -> int:
    return CyclotomicNumber.root(math.lcm(E.chi1.order, E.chi2.order)).order


def galois_conjugate_form(E: EisensteinNewform, t: int) -> EisensteinNewform:
    L = math.lcm(E.chi1.order, E.chi2.order)
    t %= L if L > 1 else 1
    if L == 1:
        return E
    return EisensteinNewform(E.chi1.galois_conjugate(t), E.chi2.galois_conjugate(t), E.k)


def galois_units(E: EisensteinNewform) -> list[int]:
    L = _value_order(E)
    return [t for t in range(1, max(L, 2)) if gcd(t, L) == 1]


def _galois(v, t: int, L: int):
    v = exact(v)
    if not isinstance(v, CyclotomicNumber):
        return v
    return exact(v.lift(math.lcm(v.order, L)).galois(t))


def trace(alpha, E: EisensteinNewform, B: int) -> QExpansion:
    """Tr(alpha E) = sum over sigma in Gal(Q(E)/Q) of sigma(alpha) E^sigma, to q^B."""
    L = _value_order(E)
    alpha = exact(alpha)
    if isinstance(alpha, CyclotomicNumber) and L % alpha.order:
        raise DecompositionError(f"alpha lies outside the coefficient field Q(zeta_{L})")
    ex = q_expansion(E, B).values()
    total = [0] * (B + 1)
    for t in galois_units(E):
        for n, v in enumerate(ex):
            total[n] = total[n] + _galois(alpha * v, t, L) if v != 0 else total[n]
    total = [exact(v) for v in total]
    for v in total:
        if isinstance(v, CyclotomicNumber):
            raise NonRationalError(f"trace coefficient {v} is not rational")
    chi = E.nebentypus if E.nebentypus.is_quadratic else None
    return QExpansion(total[0], tuple(total[1:]), E.k, E.level, chi)


@dataclass(frozen=True)
class RationalStructure:
    real_terms: tuple
    orbits: tuple
    certified: bool

    def to_dict(self) -> dict:
        fmt = lambda c, E, d: {"c": format_exact(c), "E": str(E), "d": d}  # noqa: E731
        return {
            "real_terms": [fmt(*t) for t in self.real_terms],
            "orbits": [[fmt(*t) for t in orb] for orb in self.orbits],
            "certified": self.certified,
        }


def rational_structure(a: QExpansion, N: int, chi: DirichletCharacter, k: int) -> RationalStructure:
    """Split a rational series into real-character terms and Galois orbits of traces."""
    for v in a.values():
        if isinstance(exact(v), CyclotomicNumber) or isinstance(v, float):
            raise NonRationalError("input coefficients must be exact rationals")
    if not chi.is_quadratic:
        raise NonRealCharacterError("a rational series cannot have non-real nebentypus")
    comb = decompose(a, N, chi, k)
    table = comb.as_dict()
    real, orbits, ok, done = [], [], True, set()
    for c, E, d in comb.terms:
        if (E, d) in done:
            continue
        if E.is_quadratic:
            real.append((c, E, d))
            ok &= not isinstance(exact(c), CyclotomicNumber)
            done.add((E, d))
            continue
        L = _value_order(E)
        orbit = {}
        for t in galois_units(E):
            Et = galois_conjugate_form(E, t)
            ct = _galois(c, t, L)
            if (Et, d) in orbit:
                ok &= orbit[(Et, d)] == ct
                continue
            orbit[(Et, d)] = ct
            ok &= table.get((Et, d)) == ct
        done.update(orbit)
        orbits.append(tuple((table.get(key, 0), key[0], key[1]) for key in orbit))
    return RationalStructure(tuple(real), tuple(orbits), bool(ok))


@dataclass(frozen=True)
class CoefficientFieldReport:
    degree: int
    abelian: bool
    classification: str
    contains_nebentypus_values: bool
    cyclotomic_order: int

    def to_dict(self) -> dict:
        return dict(degree=self.degree, abelian=self.abelian, classification=self.classification,
                    contains_nebentypus_values=self.contains_nebentypus_values,
                    cyclotomic_order=self.cyclotomic_order)


def coefficient_field(E: EisensteinNewform) -> CoefficientFieldReport:
    """Q(E) = Q(zeta_L) with L the lcm of the character orders.

    Q(E) sits inside Q(zeta_L); conversely eigenvalues at large primes in a
    fixed class pin down chi1(p) and chi2(p) separately, so every value lies
    in Q(E).
    """
    L = _value_order(E)
    degree = _totient(L)
    if E.is_quadratic:
        cls = "rational"
    elif L <= 2:
        cls = "totally-real"
    else:
        cls = "CM"
    neb_order = E.nebentypus.order
    return CoefficientFieldReport(degree, True, cls, L % CyclotomicNumber.root(neb_order).order == 0, L)


# -- non-negativity ----------------------------------------------------------------

def is_positive_newform(E: EisensteinNewform) -> bool:
    """The newform with chi2 principal: its coefficients are all non-negative."""
    return E.chi2.is_principal


def _require_scan_hypotheses(comb: ShiftedNewformCombination) -> None:
    for c, E, d in comb.terms:
        if E.chi1.is_principal:
            raise HypothesisViolationError(
                f"hypothesis violated: {E} | B_{d} is a shift of the principal-chi1 newform")
        if is_positive_newform(E):
            raise HypothesisViolationError(
                f"hypothesis violated: {E} | B_{d} is a shift of the all-positive (chi2 principal) newform")
        if isinstance(exact(c), CyclotomicNumber) or not E.is_quadratic:
            raise NonRationalError("non-negativity scan needs rational coefficients and real characters")


def prime_slice(comb: ShiftedNewformCombination):
    """Minimal shift d and the terms (c, E, sigma(d/d_i)) whose d_i divides d."""
    d = min(dd for _, _, dd in comb.terms)
    parts = [(c, E, sigma(E.chi1, E.chi2, E.k, d // di)) for c, E, di in comb.terms if d % di == 0]
    return d, parts


def scan_bound(comb: ShiftedNewformCombination, T) -> int | None:
    """A bound on n = d p past which a prime in every class with f2 < 0 gives a(dp) < -T.

    f2(r) = sum c_i s_i chi2_i(r) is the leading class function; returns None
    when it is never negative, so that the prime scan cannot succeed.
    """
    d, parts = prime_slice(comb)
    N = comb.N
    f2 = []
    for r in range(1, N + 1):
        if gcd(r, N) == 1:
            f2.append(sum(Fraction(c) * s * E.chi2(r) for c, E, s in parts))
    neg = min(f2)
    if neg >= 0:
        return None
    f1max = sum(abs(Fraction(c) * s) for c, E, s in parts)
    k = comb.k
    p_needed = ((Fraction(T) + f1max) / -neg) ** (1.0 / (k - 1))
    # Linnik-type slack: allow the least prime in the class to exceed p_needed by a margin
    return int(d * (2 * float(p_needed) + 50 * N * max(1, int(math.log(N + 1)) ** 2)))


def nonnegativity_scan(comb: ShiftedNewformCombination, T, B: int, full_scan: bool = False):
    """Least scanned n <= B with a(n) < -T, as (n, a(n)), or None.

    The default scan walks n = d p over primes p not dividing N d, where d is
    the smallest shift present; there a(dp) = sum c_i a_{E_i}(d/d_i) a_{E_i}(p).
    """
    _require_scan_hypotheses(comb)
    T = Fraction(T)
    if T < 0:
        raise ValueError("T must be non-negative")
    if full_scan:
        ex = comb.evaluate(B)
        for n in range(1, B + 1):
            if ex[n] < -T:
                return n, ex[n]
        return None
    d, parts = prime_slice(comb)
    N = comb.N
    k1 = comb.k - 1
    tabs = [(Fraction(c) * s, E.chi1.table, E.chi1.modulus, E.chi2.table, E.chi2.modulus)
            for c, E, s in parts]
    for p in primes_upto(B // d):
        p = int(p)
        if N % p == 0 or d % p == 0:
            continue
        P = p ** k1
        total = Fraction(0)
        for w, t1, m1, t2, m2 in tabs:
            total += w * (int(t1[p % m1]) + int(t2[p % m2]) * P)
        if total < -T:
            return d * p, exact(total)
    return None
