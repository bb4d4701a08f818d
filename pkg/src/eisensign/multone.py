"""Agreement of Hecke eigenvalues between two Eisenstein newforms.

Densities of prime sets are computed exactly as shares of residue classes
modulo M = N N' (Dirichlet's theorem equidistributes primes among them).
Small primes where the class argument does not yet apply are compared
directly and listed as exceptions.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .chars import DirichletCharacter, fundamental_discriminants, multiply
from .cyclotomic import exact
from .eisen import EisensteinNewform, hecke_eigenvalue, newform_from_discriminants
from .errors import NewformError, NotQuadraticError, WeightMismatchError
from .primes import primes_upto

IDENTICAL = "identical"
TWIST = "twist-related"
UNRELATED = "unrelated"


@dataclass(frozen=True)
class AgreementAnalysis:
    modulus: int
    agreeing_classes: tuple[int, ...]
    density: Fraction
    small_prime_exceptions: tuple[tuple[int, bool], ...]
    verdict: str
    note: str = ""
    twist: DirichletCharacter | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "agreeing_classes": len(self.agreeing_classes),
            "density": str(self.density),
            "small_prime_exceptions": [[p, a] for p, a in self.small_prime_exceptions],
            "verdict": self.verdict,
            "note": self.note,
            "twist": str(self.twist) if self.twist is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _require_quadratic(*forms: EisensteinNewform) -> None:
    for f in forms:
        if not f.is_quadratic:
            raise NotQuadraticError(f"{f} has non-quadratic characters")


def _value_threshold(k: int, bound: float) -> int:
    """Largest prime p with p^(k-1) <= bound, or 1 if there is none."""
    p0 = 1
    for p in primes_upto(max(2, int(bound) + 1)):
        if int(p) ** (k - 1) <= bound:
            p0 = int(p)
    return p0


def agreement_threshold(f: EisensteinNewform, g: EisensteinNewform) -> int:
    """Least p0 such that, for primes p > p0, equal eigenvalues force equal characters."""
    if f.k != g.k:
        raise WeightMismatchError(f"weights differ: {f.k} != {g.k}")
    if f.is_quadratic and g.is_quadratic:
        # |chi1 - psi1| <= 2 and a nonzero |psi2 - chi2| is at least 1
        return _value_threshold(f.k, 2)
    # general values: numerator at most 2(1 + |c|) with c = 1, denominator at
    # least the smallest chord between distinct L-th roots of unity
    order = math.lcm(f.chi1.order, f.chi2.order, g.chi1.order, g.chi2.order, 2)
    min_gap = min(2 * math.sin(math.pi / order), 1.0)
    return math.ceil((4 / min_gap) ** (1 / (f.k - 1)) - 1e-12)


def _class_arrays(M: int, chars: list[DirichletCharacter]):
    L = math.lcm(*(c.order for c in chars))
    r = np.arange(M)
    units = np.gcd(r, M) == 1
    vals = [c.angles(L)[r % c.modulus] for c in chars]
    return r, units, vals


def _direct_exceptions(f, g, cutoff: int, M: int, compare) -> tuple[tuple[int, bool], ...]:
    out = []
    for p in primes_upto(cutoff):
        p = int(p)
        if M % p:
            out.append((p, bool(compare(hecke_eigenvalue(f, p), hecke_eigenvalue(g, p)))))
    return tuple(out)


def _weight_cutoff(k: int, kk: int) -> int:
    """Beyond this prime |a_f(p)| >= p^(k-1) - 1 > p^(k'-1) + 1 >= |a_g(p)| for k > k'."""
    hi, lo = max(k, kk), min(k, kk)
    cutoff = 1
    for p in primes_upto(64):
        p = int(p)
        if not p ** (hi - 1) - 1 > p ** (lo - 1) + 1:
            cutoff = p
    return cutoff


def eigenvalue_agreement_density(f: EisensteinNewform, g: EisensteinNewform) -> AgreementAnalysis:
    """Density of primes p with a_f(p) = a_g(p)."""
    M = f.level * g.level
    if f.k != g.k:
        cutoff = _weight_cutoff(f.k, g.k)
        exc = _direct_exceptions(f, g, cutoff, M, lambda a, b: a == b)
        return AgreementAnalysis(M, (), Fraction(0), exc, UNRELATED, note="weights differ")
    r, units, (a1, a2, b1, b2) = _class_arrays(M, [f.chi1, f.chi2, g.chi1, g.chi2])
    agree = units & (a1 == b1) & (a2 == b2)
    classes = tuple(int(c) for c in r[agree])
    density = Fraction(len(classes), int(units.sum()))
    p0 = agreement_threshold(f, g)
    exc = _direct_exceptions(f, g, p0, M, lambda a, b: a == b)
    theta = None
    if f == g:
        verdict = IDENTICAL
    elif density > Fraction(1, 2):
        # cannot happen for distinct newforms
        verdict = IDENTICAL
    elif density == Fraction(1, 2):
        theta = detect_twist(f, g) if f.is_quadratic and g.is_quadratic else None
        verdict = TWIST if theta is not None else UNRELATED
    else:
        verdict = UNRELATED
    note = ""
    if density == Fraction(1, 2) and theta is None:
        note = "unrelated (density 1/2, no quadratic twist found)"
    return AgreementAnalysis(M, classes, density, exc, verdict, note=note, twist=theta)


def _sign(z) -> int:
    return (z > 0) - (z < 0)


def sign_agreement_density(f: EisensteinNewform, g: EisensteinNewform) -> AgreementAnalysis:
    """Density of primes p with sgn a_f(p) = sgn a_g(p); sign at p prime to the level is chi2(p)."""
    _require_quadratic(f, g)
    if f.k != g.k:
        raise WeightMismatchError(f"weights differ: {f.k} != {g.k}")
    M = f.level * g.level
    r, units, (a2, b2) = _class_arrays(M, [f.chi2, g.chi2])
    agree = units & (a2 == b2)
    classes = tuple(int(c) for c in r[agree])
    density = Fraction(len(classes), int(units.sum()))
    # distinct points of {+1, -1} stay 1 apart under positive scaling, so the
    # class argument needs 2 p^(1-k) < 1
    exc = _direct_exceptions(f, g, _value_threshold(f.k, 2), M, lambda a, b: _sign(a) == _sign(b))
    theta = None if f == g else detect_twist(f, g)
    if f == g or density > Fraction(1, 2):
        verdict = IDENTICAL
    else:
        verdict = TWIST if theta is not None else UNRELATED
    note = "density above 1/2 for distinct newforms" if density > Fraction(1, 2) and f != g else ""
    return AgreementAnalysis(M, classes, density, exc, verdict, note=note, twist=theta)


def detect_twist(f: EisensteinNewform, g: EisensteinNewform) -> DirichletCharacter | None:
    """Quadratic theta with a_f(p) = theta(p) a_g(p) for all p prime to N N', if any."""
    _require_quadratic(f, g)
    if f.k != g.k or f == g:
        return None
    t1 = multiply(f.chi1, g.chi1).primitive_part()
    t2 = multiply(f.chi2, g.chi2).primitive_part()
    if t1 != t2 or t1.is_principal:
        return None
    M = f.level * g.level
    for n in range(M):
        if gcd(n, M) != 1:
            continue
        th = t1(n)
        if f.chi1(n) != th * g.chi1(n) or f.chi2(n) != th * g.chi2(n):
            return None
    return t1


def nth_power_relation(f: EisensteinNewform, g: EisensteinNewform, n: int) -> DirichletCharacter | None:
    """theta with a_f(p) = theta(p) a_g(p) and chi_f = theta^2 chi_g, when a_f(p)^n = a_g(p)^n
    on a set of primes of density above 1/2; otherwise None.

    For large p in a class r, a_f(p)^n = a_g(p)^n holds exactly when
    chi1(r) = e psi1(r) and chi2(r) = e psi2(r) for a single n-th root of unity e.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if f.k != g.k:
        raise WeightMismatchError(f"weights differ: {f.k} != {g.k}")
    M = f.level * g.level
    L = math.lcm(f.chi1.order, f.chi2.order, g.chi1.order, g.chi2.order, n)
    r, units, (a1, a2, b1, b2) = _class_arrays(M, [f.chi1, f.chi2, g.chi1, g.chi2])
    d1, d2 = (a1 - b1) % L, (a2 - b2) % L
    # ratios chi/psi must be the same n-th root of unity in both slots
    same = (d1 == d2) & ((d1 * n) % L == 0)
    density = Fraction(int((units & same).sum()), int(units.sum()))
    if density <= Fraction(1, 2):
        return None
    theta = multiply(f.chi1, g.chi1.conjugate()).induce(M)
    for c in r[units]:
        c = int(c)
        th = theta(c)
        if f.chi1(c) != th * g.chi1(c) or f.chi2(c) != th * g.chi2(c):
            return None
    chi_f, chi_g = f.nebentypus.induce(M), g.nebentypus.induce(M)
    if chi_f != multiply(multiply(theta, theta), chi_g):
        return None
    return theta.primitive_part()


def quadratic_newforms(max_level: int, weights) -> list[EisensteinNewform]:
    """All E((D1/.), (D2/.), k) with |D1 D2| <= max_level and k in weights."""
    Ds = fundamental_discriminants(max_level)
    out = []
    for k in weights:
        for D1 in Ds:
            for D2 in Ds:
                if abs(D1 * D2) > max_level:
                    continue
                try:
                    out.append(newform_from_discriminants(D1, D2, k))
                except NewformError:
                    pass
    return out


def eigenvalues_agree_up_to(f, g, bound: int) -> list[int]:
    """Primes p <= bound, p prime to N N', with a_f(p) = a_g(p); a direct cross-check."""
    M = f.level * g.level
    return [int(p) for p in primes_upto(bound) if M % int(p)
            and exact(hecke_eigenvalue(f, int(p))) == exact(hecke_eigenvalue(g, int(p)))]
