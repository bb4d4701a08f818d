"""Eisenstein newforms E(chi1, chi2, k) and their q-expansions.

The n-th coefficient is the twisted divisor sum

    sigma(n) = sum_{d | n} chi1(n/d) chi2(d) d^(k-1),

and the constant term is L(1-k, chi2)/2 when chi1 is principal, else 0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

import sympy

from .chars import DirichletCharacter, char_from_discriminant, multiply
from .cyclotomic import CyclotomicNumber, exact, format_exact, parse_exact
from .errors import (ExcludedFormError, NotCoprimeError, NotPrimitiveError, NotQuadraticError,
                     ParityError, RamifiedPrimeError)


@dataclass(frozen=True)
class EisensteinNewform:
    chi1: DirichletCharacter
    chi2: DirichletCharacter
    k: int

    @property
    def level(self) -> int:
        return self.chi1.modulus * self.chi2.modulus

    @cached_property
    def nebentypus(self) -> DirichletCharacter:
        return multiply(self.chi1, self.chi2).induce(self.level)

    @property
    def is_quadratic(self) -> bool:
        return self.chi1.is_quadratic and self.chi2.is_quadratic

    @property
    def descriptor(self) -> str:
        if self.is_quadratic:
            return f"{self.chi1.discriminant()}:{self.chi2.discriminant()}:{self.k}"
        return f"{self.chi1};{self.chi2};{self.k}"

    def __str__(self):
        return f"E({self.descriptor})"

    def coefficient(self, n: int):
        if n == 0:
            return constant_term(self.chi1, self.chi2, self.k)
        return sigma(self.chi1, self.chi2, self.k, n)

    def eigenvalue(self, p: int):
        return hecke_eigenvalue(self, p)


def make_newform(chi1: DirichletCharacter, chi2: DirichletCharacter, k: int) -> EisensteinNewform:
    """Validate (chi1, chi2, k) as an Eisenstein newform."""
    if k < 2:
        raise ParityError(f"weight must be at least 2, got {k}")
    for name, chi in (("chi1", chi1), ("chi2", chi2)):
        if not chi.is_primitive:
            raise NotPrimitiveError(f"{name} is not primitive (conductor {chi.conductor}, modulus {chi.modulus})")
    if chi1.modulus == 1 and chi2.modulus == 1 and k == 2:
        raise ExcludedFormError("excluded level-1 weight-2 case")
    if chi1.parity * chi2.parity != (-1) ** k:
        raise ParityError(f"parity: chi1 chi2(-1) = {chi1.parity * chi2.parity} but (-1)^k = {(-1) ** k}")
    return EisensteinNewform(chi1, chi2, k)


def newform_from_discriminants(D1: int, D2: int, k: int) -> EisensteinNewform:
    return make_newform(char_from_discriminant(D1), char_from_discriminant(D2), k)


def parse_newform(text: str) -> EisensteinNewform:
    """Parse "D1:D2:k", or "chi1;chi2;k" with serialised characters."""
    if ";" in text:
        a, b, k = text.split(";")
        return make_newform(DirichletCharacter.parse(a), DirichletCharacter.parse(b), int(k))
    D1, D2, k = (int(t) for t in text.split(":"))
    return newform_from_discriminants(D1, D2, k)


# -- divisor sums ---------------------------------------------------------------

def sigma(chi1: DirichletCharacter, chi2: DirichletCharacter, k: int, n: int):
    """sum_{d | n} chi1(n/d) chi2(d) d^(k-1), exactly."""
    if n < 1:
        raise ValueError("n must be positive")
    if chi1.is_quadratic and chi2.is_quadratic:
        total = 0
        for d in sympy.divisors(n):
            total += chi1(n // d) * chi2(d) * d ** (k - 1)
        return total
    L = chi1.order * chi2.order // gcd(chi1.order, chi2.order)
    terms: dict[int, int] = {}
    s1, s2 = L // chi1.order, L // chi2.order
    for d in sympy.divisors(n):
        a, b = chi1.exponent(n // d), chi2.exponent(d)
        if a is None or b is None:
            continue
        e = (a * s1 + b * s2) % L
        terms[e] = terms.get(e, 0) + d ** (k - 1)
    return CyclotomicNumber.from_terms(L, terms)


def sigma_table(chi1: DirichletCharacter, chi2: DirichletCharacter, k: int, B: int) -> list:
    """[sigma(1), ..., sigma(B)] by a divisor sieve; index 0 holds 0."""
    out: list = [0] * (B + 1)
    if chi1.is_quadratic and chi2.is_quadratic:
        v1 = [chi1(m) for m in range(chi1.modulus)]
        v2 = [chi2(m) for m in range(chi2.modulus)]
        N1, N2 = chi1.modulus, chi2.modulus
        for d in range(1, B + 1):
            c = v2[d % N2]
            if not c:
                continue
            c *= d ** (k - 1)
            for m in range(1, B // d + 1):
                s = v1[m % N1]
                if s:
                    out[d * m] += s * c
        return out
    L = chi1.order * chi2.order // gcd(chi1.order, chi2.order)
    s1, s2 = L // chi1.order, L // chi2.order
    terms = [dict() for _ in range(B + 1)]
    for d in range(1, B + 1):
        b = chi2.exponent(d)
        if b is None:
            continue
        w = d ** (k - 1)
        for m in range(1, B // d + 1):
            a = chi1.exponent(m)
            if a is None:
                continue
            e = (a * s1 + b * s2) % L
            t = terms[d * m]
            t[e] = t.get(e, 0) + w
    for n in range(1, B + 1):
        out[n] = CyclotomicNumber.from_terms(L, terms[n])
    return out


@lru_cache(maxsize=None)
def _bernoulli_poly(k: int) -> tuple[Fraction, ...]:
    """Coefficients of the Bernoulli polynomial B_k(x), lowest degree first."""
    poly = sympy.Poly(sympy.bernoulli(k, sympy.Symbol("x")), sympy.Symbol("x"))
    return tuple(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))


def generalized_bernoulli(k: int, chi: DirichletCharacter):
    """B_{k,chi} = f^(k-1) sum_{a=1}^{f} chi(a) B_k(a/f) with f the conductor."""
    prim = chi.primitive_part()
    f = prim.modulus
    poly = _bernoulli_poly(k)
    total = CyclotomicNumber.rational(0) if not prim.is_quadratic else Fraction(0)
    for a in range(1, f + 1):
        v = prim(a)
        if v == 0:
            continue
        t = Fraction(a, f)
        bk = sum(c * t**i for i, c in enumerate(poly))
        total = total + v * bk
    return exact(total * f ** (k - 1))


def l_value_at_one_minus_k(k: int, chi: DirichletCharacter):
    """L(1-k, chi) = -B_{k,chi} / k for the primitive character underlying chi."""
    return exact(generalized_bernoulli(k, chi) * Fraction(-1, k))


def constant_term(chi1: DirichletCharacter, chi2: DirichletCharacter, k: int):
    if not chi1.is_principal:
        return 0
    return exact(l_value_at_one_minus_k(k, chi2) * Fraction(1, 2))


# -- q-expansions -----------------------------------------------------------------

@dataclass(frozen=True)
class QExpansion:
    """Truncated q-series a(0) + a(1) q + ... + a(B) q^B with exact coefficients."""

    constant: object
    coeffs: tuple
    k: int
    level: int
    chi: DirichletCharacter | None = field(default=None, compare=False)

    @property
    def bound(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int):
        if n == 0:
            return self.constant
        if not 1 <= n <= len(self.coeffs):
            raise IndexError(n)
        return self.coeffs[n - 1]

    def values(self) -> list:
        return [self.constant, *self.coeffs]

    def is_rational(self) -> bool:
        return all(not isinstance(exact(v), CyclotomicNumber) for v in self.values())

    def truncate(self, B: int) -> QExpansion:
        return QExpansion(self.constant, self.coeffs[:B], self.k, self.level, self.chi)

    def to_dict(self) -> dict:
        return {
            "constant": format_exact(self.constant),
            "coeffs": [format_exact(c) for c in self.coeffs],
            "k": self.k,
            "N": self.level,
            "chi": str(self.chi) if self.chi is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> QExpansion:
        chi = DirichletCharacter.parse(data["chi"]) if data.get("chi") else None
        return cls(parse_exact(data["constant"]), tuple(parse_exact(c) for c in data["coeffs"]),
                   int(data["k"]), int(data["N"]), chi)

    @classmethod
    def from_json(cls, text: str) -> QExpansion:
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_lines(cls, text: str, k: int, level: int, chi: DirichletCharacter | None = None) -> QExpansion:
        """One exact value per line, starting with the constant term."""
        vals = [parse_exact(line) for line in text.split() if line.strip()]
        if not vals:
            raise ValueError("empty q-expansion")
        return cls(vals[0], tuple(vals[1:]), k, level, chi)


def q_expansion(E: EisensteinNewform, B: int) -> QExpansion:
    if B < 1:
        raise ValueError("B must be positive")
    coeffs = sigma_table(E.chi1, E.chi2, E.k, B)[1:]
    return QExpansion(constant_term(E.chi1, E.chi2, E.k), tuple(exact(c) for c in coeffs),
                      E.k, E.level, E.nebentypus)


# -- eigenvalues, signs, twists ----------------------------------------------------

def hecke_eigenvalue(E: EisensteinNewform, p: int):
    """chi1(p) + chi2(p) p^(k-1) for a prime p not dividing the level."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if E.level % p == 0:
        raise RamifiedPrimeError(f"{p} divides the level {E.level}")
    return exact(E.chi1(p) + E.chi2(p) * p ** (E.k - 1))


def sign_at(chi1: DirichletCharacter, chi2: DirichletCharacter, k: int, n: int) -> int:
    """Sign of sigma(n) for n coprime to the level: it is chi2(n)."""
    if not (chi1.is_quadratic and chi2.is_quadratic):
        raise NotQuadraticError("sign_at needs quadratic characters")
    if gcd(n, chi1.modulus * chi2.modulus) != 1:
        raise NotCoprimeError(f"gcd({n}, {chi1.modulus * chi2.modulus}) > 1")
    return chi2(n)


def twist(E: EisensteinNewform, theta: DirichletCharacter) -> EisensteinNewform:
    """E(chi1 theta, chi2 theta, k) for primitive quadratic theta of conductor prime to the level."""
    if not theta.is_quadratic:
        raise NotQuadraticError("twisting character must be quadratic")
    if not theta.is_primitive:
        raise NotPrimitiveError("twisting character must be primitive")
    if gcd(theta.modulus, E.level) != 1:
        raise NotCoprimeError(f"conductor {theta.modulus} is not coprime to level {E.level}")
    return make_newform(multiply(E.chi1, theta), multiply(E.chi2, theta), E.k)
