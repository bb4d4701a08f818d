"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) of Q(zeta_m)
with rational coordinates.  Elements living in different cyclotomic fields
are lifted to the field of the lcm of their orders before combining, so
equality is always decided exactly.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

import sympy
from sympy.abc import x as _x


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(m, _x), _x).all_coeffs()))


@lru_cache(maxsize=None)
def _totient(m: int) -> int:
    return int(sympy.totient(m))


def _reduce(m: int, terms: dict[int, Fraction]) -> tuple[Fraction, ...]:
    """Reduce sum(c * z^e) modulo Phi_m to a coordinate vector."""
    phi = cyclotomic_coeffs(m)
    deg = len(phi) - 1
    top = max(terms, default=0)
    poly = [Fraction(0)] * max(top + 1, deg)
    for e, c in terms.items():
        poly[e] += c
    # Phi_m is monic, so plain long division stays in Q.
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            shift = i - deg
            for j, pc in enumerate(phi):
                if pc:
                    poly[shift + j] -= c * pc
    return tuple(poly[:deg])


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    raise TypeError(f"not an exact rational: {v!r}")


class CyclotomicNumber:
    """An element of Q(zeta_order), immutable."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords):
        if order < 1:
            raise ValueError("order must be positive")
        coords = tuple(_as_fraction(c) for c in coords)
        if len(coords) != _totient(order):
            raise ValueError(f"expected {_totient(order)} coordinates for order {order}")
        if order % 4 == 2:
            # Q(zeta_{2m}) = Q(zeta_m) for odd m; keep the smaller order.
            half = order // 2
            terms = {}
            for j, c in enumerate(coords):
                if c:
                    # zeta_{2m} = -zeta_m^((m+1)/2)
                    e = (j * (half + 1) // 2) % half
                    terms[e] = terms.get(e, Fraction(0)) + (c if j % 2 == 0 else -c)
            order, coords = half, _reduce(half, terms)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # construction ---------------------------------------------------------
    @classmethod
    def from_terms(cls, order: int, terms: dict[int, Fraction]) -> CyclotomicNumber:
        reduced = {}
        for e, c in terms.items():
            c = _as_fraction(c)
            if c:
                e %= order
                reduced[e] = reduced.get(e, Fraction(0)) + c
        return cls(order, _reduce(order, reduced))

    @classmethod
    def root(cls, order: int, exponent: int = 1) -> CyclotomicNumber:
        return cls.from_terms(order, {exponent: Fraction(1)})

    @classmethod
    def rational(cls, value) -> CyclotomicNumber:
        return cls(1, (_as_fraction(value),))

    @staticmethod
    def coerce(value) -> CyclotomicNumber:
        if isinstance(value, CyclotomicNumber):
            return value
        return CyclotomicNumber.rational(value)

    # structure ------------------------------------------------------------
    def lift(self, order: int) -> CyclotomicNumber:
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {order}")
        if order == self.order:
            return self
        step = order // self.order
        return CyclotomicNumber.from_terms(order, {j * step: c for j, c in enumerate(self.coords) if c})

    def _common(self, other: CyclotomicNumber) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        m = _lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                other = CyclotomicNumber.rational(other)
            except TypeError:
                return NotImplemented
        a, b = self._common(other)
        return CyclotomicNumber(a.order, (u + v for u, v in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, (-c for c in self.coords))

    def __sub__(self, other):
        return self + (-CyclotomicNumber.coerce(other))

    def __rsub__(self, other):
        return CyclotomicNumber.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                q = _as_fraction(other)
            except TypeError:
                return NotImplemented
            return CyclotomicNumber(self.order, (c * q for c in self.coords))
        a, b = self._common(other)
        terms: dict[int, Fraction] = {}
        for i, u in enumerate(a.coords):
            if u:
                for j, v in enumerate(b.coords):
                    if v:
                        terms[i + j] = terms.get(i + j, Fraction(0)) + u * v
        return CyclotomicNumber.from_terms(a.order, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicNumber.rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, t: int) -> CyclotomicNumber:
        """Image under the automorphism zeta_m -> zeta_m^t."""
        if gcd(t, self.order) != 1:
            raise ValueError(f"{t} is not a unit modulo {self.order}")
        return CyclotomicNumber.from_terms(self.order, {j * t: c for j, c in enumerate(self.coords) if c})

    def conjugate(self) -> CyclotomicNumber:
        return self.galois(-1)

    def galois_units(self) -> list[int]:
        return [t for t in range(1, max(self.order, 2)) if gcd(t, self.order) == 1]

    def norm(self) -> Fraction:
        prod = CyclotomicNumber.rational(1)
        for t in self.galois_units():
            prod = prod * self.galois(t)
        return prod.to_rational()

    def trace(self) -> Fraction:
        total = CyclotomicNumber.rational(0)
        for t in self.galois_units():
            total = total + self.galois(t)
        return total.to_rational()

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        others = CyclotomicNumber.rational(1)
        for t in self.galois_units():
            if t != 1:
                others = others * self.galois(t)
        n = (others * self).to_rational()
        return others * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self * other.inverse()
        return self * (1 / _as_fraction(other))

    def __rtruediv__(self, other):
        return CyclotomicNumber.coerce(other) * self.inverse()

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, CyclotomicNumber):
            try:
                other = CyclotomicNumber.rational(other)
            except TypeError:
                return NotImplemented
        a, b = self._common(other)
        return a.coords == b.coords

    def __hash__(self):
        # The normalised trace does not depend on the ambient field.
        return hash(self.trace() / _totient(self.order))

    def __complex__(self):
        import cmath

        z = cmath.exp(2j * cmath.pi / self.order)
        return complex(sum(float(c) * z**j for j, c in enumerate(self.coords) if c))

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {[str(c) for c in self.coords]})"

    def __str__(self):
        if self.is_rational():
            return str(self.coords[0])
        return f"cyc({self.order};{','.join(str(c) for c in self.coords)})"

    @classmethod
    def parse(cls, text: str) -> CyclotomicNumber:
        text = text.strip()
        if not text.startswith("cyc("):
            return cls.rational(Fraction(text))
        order, _, body = text[4:-1].partition(";")
        return cls(int(order), (Fraction(c) for c in body.split(",")))


def exact(value):
    """Collapse a rational CyclotomicNumber to an int or Fraction."""
    if isinstance(value, CyclotomicNumber):
        if not value.is_rational():
            return value
        value = value.coords[0]
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


def format_exact(value) -> str:
    value = exact(value)
    return str(value)


def parse_exact(text: str):
    return exact(CyclotomicNumber.parse(text))
