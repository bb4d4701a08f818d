"""Dirichlet characters with exact root-of-unity values.

A character mod N is stored as a dense table of exponents: ``exps[r]`` is
``j`` when chi(r) = exp(2 pi i j / order), and ``None`` when gcd(r, N) > 1.
Quadratic characters (order <= 2) evaluate to plain ints in {-1, 0, 1}.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, isqrt

import numpy as np
import sympy
from sympy.ntheory.modular import crt

from .cyclotomic import CyclotomicNumber
from .errors import CharacterError, NotFundamentalError


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# -- Kronecker symbol and fundamental discriminants -----------------------

def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n), defined for all integers D and n."""
    if n == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(D, n)


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for e in sympy.factorint(n).values())


def is_fundamental(D: int) -> bool:
    """True iff D is 1 or the discriminant of a quadratic field."""
    if D == 1:
        return True
    if D == 0:
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


@dataclass(frozen=True)
class FundamentalDiscriminant:
    D: int
    real_quadratic: bool = False

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise NotFundamentalError(f"{self.D} is not a fundamental discriminant")
        if self.real_quadratic and self.D <= 1:
            raise NotFundamentalError(f"{self.D} does not belong to a real quadratic field")

    def character(self) -> DirichletCharacter:
        return char_from_discriminant(self.D)


def _squarefree_mask(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """mask[i] is True iff lo + i is squarefree, for lo >= 1."""
    mask = np.ones(hi - lo, dtype=bool)
    for p in primes:
        q = int(p) * int(p)
        if q >= hi:
            break
        start = (-lo) % q
        mask[start::q] = False
    return mask


def enumerate_fundamental(x: int, include_one: bool = False, segment: int = 1 << 20) -> np.ndarray:
    """Real-quadratic fundamental discriminants 1 < D <= x in increasing order.

    Squarefree sieve over segments of ``segment`` integers; memory is linear
    in the segment size plus the output.
    """
    from .primes import primes_upto

    if x < 1:
        raise ValueError("x must be >= 1")
    primes = primes_upto(isqrt(x) + 1)
    chunks = [np.array([1], dtype=np.int64)] if include_one else []
    lo = 2
    while lo <= x:
        hi = min(x + 1, lo + segment)
        n = np.arange(lo, hi, dtype=np.int64)
        odd = (n % 4 == 1) & _squarefree_mask(lo, hi, primes)
        # D = 4m with m = 2, 3 mod 4 squarefree
        mlo, mhi = (lo + 3) // 4, (hi - 1) // 4 + 1
        even = np.zeros(hi - lo, dtype=bool)
        if mlo < mhi:
            m = np.arange(mlo, mhi, dtype=np.int64)
            ok = ((m % 4 == 2) | (m % 4 == 3)) & _squarefree_mask(max(mlo, 1), mhi, primes)[: mhi - mlo]
            even[4 * m[ok] - lo] = True
        chunks.append(n[odd | even])
        lo = hi
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(chunks)


def fundamental_discriminants(bound: int, positive_only: bool = False) -> list[int]:
    """All fundamental D with |D| <= bound (D = 1 included), sorted by |D| then sign."""
    out = [D for a in range(1, bound + 1) for D in ((a, -a) if a > 1 else (1,))
           if (D > 0 or not positive_only) and is_fundamental(D)]
    return sorted(out, key=lambda D: (abs(D), D < 0))


# -- unit group ------------------------------------------------------------

@lru_cache(maxsize=None)
def unit_group_generators(N: int) -> tuple[tuple[int, int], ...]:
    """Independent generators of (Z/N)^x with their orders."""
    if N <= 2:
        return ()
    fac = sympy.factorint(N)
    parts = [p**e for p, e in sorted(fac.items())]
    gens = []
    for p, e in sorted(fac.items()):
        q = p**e
        local = []
        if p == 2:
            if e >= 2:
                local.append((q - 1, 2))
            if e >= 3:
                local.append((5, q // 4))
        else:
            local.append((int(sympy.primitive_root(q)), q // p * (p - 1)))
        for g, order in local:
            residues = [g if r == q else 1 for r in parts]
            lifted = int(crt(parts, residues)[0]) % N
            gens.append((lifted, order))
    return tuple(gens)


def _normalise(order: int, exps) -> tuple[int, tuple]:
    g = order
    for e in exps:
        if e is not None:
            g = gcd(g, e)
            if g == 1:
                break
    if g > 1:
        order //= g
        exps = tuple(None if e is None else e // g for e in exps)
    return order, tuple(exps)


# -- characters ---------------------------------------------------------------

@dataclass(frozen=True, eq=True)
class DirichletCharacter:
    modulus: int
    order: int
    exps: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.exps) != self.modulus:
            raise CharacterError("value table has the wrong length")

    @classmethod
    def build(cls, modulus: int, order: int, exps) -> DirichletCharacter:
        order, exps = _normalise(order, [None if e is None else e % order for e in exps])
        return cls(modulus, order, exps)

    @classmethod
    def principal(cls, modulus: int = 1) -> DirichletCharacter:
        return cls.build(modulus, 1, [0 if gcd(r, modulus) == 1 else None for r in range(modulus)])

    @classmethod
    def from_images(cls, modulus: int, images: dict[int, tuple[int, int]]) -> DirichletCharacter:
        """Character determined by chi(g) = exp(2 pi i j / m) for (m, j) = images[g].

        The given residues must generate (Z/modulus)^x; inconsistent images
        raise CharacterError.
        """
        L = 1
        for m, _ in images.values():
            L = _lcm(L, m)
        table: dict[int, int] = {1 % modulus: 0}
        frontier = [1 % modulus]
        steps = [(g % modulus, (j * (L // m)) % L) for g, (m, j) in images.items()]
        for g, _ in steps:
            if gcd(g, modulus) != 1:
                raise CharacterError(f"{g} is not a unit modulo {modulus}")
        while frontier:
            nxt = []
            for r in frontier:
                for g, a in steps:
                    s = r * g % modulus
                    v = (table[r] + a) % L
                    if s in table:
                        if table[s] != v:
                            raise CharacterError("images do not define a homomorphism")
                    else:
                        table[s] = v
                        nxt.append(s)
            frontier = nxt
        units = [r for r in range(modulus) if gcd(r, modulus) == 1]
        if len(table) != len(units):
            raise CharacterError("images do not determine the character on all units")
        return cls.build(modulus, L, [table.get(r) for r in range(modulus)])

    # evaluation ----------------------------------------------------------------
    def exponent(self, n: int):
        return self.exps[n % self.modulus]

    def code(self, n: int):
        """(order, exponent) of chi(n) in lowest terms, or None when chi(n) = 0."""
        e = self.exps[n % self.modulus]
        if e is None:
            return None
        g = gcd(e, self.order)
        return (self.order // g, e // g)

    def __call__(self, n: int):
        e = self.exps[n % self.modulus]
        if e is None:
            return 0
        if self.order == 1:
            return 1
        if self.order == 2:
            return 1 if e == 0 else -1
        return CyclotomicNumber.root(self.order, e)

    value = __call__

    @cached_property
    def table(self) -> np.ndarray:
        """Values as an int8 array over residues; only for quadratic characters."""
        if not self.is_quadratic:
            raise CharacterError("int table only exists for quadratic characters")
        return np.array([0 if e is None else (1 if e == 0 else -1) for e in self.exps], dtype=np.int8)

    def angles(self, L: int) -> np.ndarray:
        """Exponents relative to zeta_L (L a multiple of the order); -1 marks zero."""
        step = L // self.order
        return np.array([-1 if e is None else e * step for e in self.exps], dtype=np.int64)

    # structure ---------------------------------------------------------------
    @property
    def is_quadratic(self) -> bool:
        return self.order <= 2

    @property
    def is_principal(self) -> bool:
        return self.order == 1

    @property
    def is_real(self) -> bool:
        return self.is_quadratic

    @property
    def parity(self) -> int:
        return 1 if self.exps[-1 % self.modulus] == 0 else -1

    @cached_property
    def conductor(self) -> int:
        N = self.modulus
        for d in sympy.divisors(N):
            if all(self.exps[n] == 0 for n in range(1, N, d) if self.exps[n] is not None):
                return d
        return N

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive_part(self) -> DirichletCharacter:
        f = self.conductor
        if f == self.modulus:
            return self
        exps = []
        for r in range(f):
            if gcd(r, f) != 1:
                exps.append(None)
                continue
            n = r
            while gcd(n, self.modulus) != 1:
                n += f
            exps.append(self.exps[n])
        return DirichletCharacter.build(f, self.order, exps)

    def induce(self, M: int) -> DirichletCharacter:
        prim = self.primitive_part()
        if M % prim.modulus:
            raise CharacterError(f"conductor {prim.modulus} does not divide {M}")
        f = prim.modulus
        return DirichletCharacter.build(
            M, prim.order, [prim.exps[n % f] if gcd(n, M) == 1 else None for n in range(M)])

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        return multiply(self, other)

    def conjugate(self) -> DirichletCharacter:
        return DirichletCharacter.build(self.modulus, self.order,
                                        [None if e is None else -e for e in self.exps])

    def galois_conjugate(self, t: int) -> DirichletCharacter:
        if gcd(t, self.order) != 1:
            raise CharacterError(f"{t} is not coprime to the order {self.order}")
        return DirichletCharacter.build(self.modulus, self.order,
                                        [None if e is None else e * t for e in self.exps])

    def same_primitive(self, other: DirichletCharacter) -> bool:
        return self.primitive_part() == other.primitive_part()

    def discriminant(self) -> int:
        """Fundamental discriminant of a primitive quadratic character."""
        if not (self.is_quadratic and self.is_primitive):
            raise CharacterError("only primitive quadratic characters have a discriminant")
        return self.modulus * self.parity

    # serialisation ------------------------------------------------------------
    def __str__(self):
        if self.is_quadratic and self.is_primitive:
            return f"disc:{self.discriminant()}"
        items = ",".join(f"({r},{c[0]},{c[1]})" for r in range(self.modulus)
                         if (c := self.code(r)) is not None)
        return f"mod:{self.modulus}:[{items}]"

    @classmethod
    def parse(cls, text: str) -> DirichletCharacter:
        text = text.strip()
        if text.startswith("disc:"):
            D = int(text[5:])
            return char_from_discriminant(D)
        if text.startswith("mod:"):
            _, N, body = text.split(":", 2)
            N = int(N)
            triples = ast.literal_eval(body) if body.strip() != "[]" else []
            if isinstance(triples, tuple) and triples and isinstance(triples[0], int):
                triples = [triples]
            L = 1
            for _, m, _ in triples:
                L = _lcm(L, m)
            exps: list = [None] * N
            for r, m, j in triples:
                exps[r % N] = j * (L // m)
            units = [r for r in range(N) if gcd(r, N) == 1]
            if sorted(r % N for r, _, _ in triples) != units:
                raise CharacterError("value list must cover exactly the units")
            chi = cls.build(N, L, exps)
            check_character(chi)
            return chi
        raise CharacterError(f"unrecognised character string {text!r}")


def check_character(chi: DirichletCharacter) -> None:
    """Raise CharacterError unless chi is a multiplicative, 1 at 1."""
    N, L = chi.modulus, chi.order
    if chi.exps[1 % N] != 0:
        raise CharacterError("chi(1) must be 1")
    units = [r for r in range(N) if gcd(r, N) == 1]
    if any(chi.exps[r] is None for r in units) or any(
            chi.exps[r] is not None for r in range(N) if gcd(r, N) != 1):
        raise CharacterError("support must be the units")
    for a in units:
        for b in units:
            if chi.exps[a * b % N] != (chi.exps[a] + chi.exps[b]) % L:
                raise CharacterError("not multiplicative")


@lru_cache(maxsize=None)
def char_from_discriminant(D: int) -> DirichletCharacter:
    """The primitive quadratic character n -> (D/n) of conductor |D|."""
    if not is_fundamental(D):
        raise NotFundamentalError(f"{D} is not a fundamental discriminant")
    N = abs(D)
    exps = []
    for r in range(N):
        k = kronecker(D, r)
        exps.append(None if k == 0 else (0 if k == 1 else 1))
    if N == 1:
        exps = [0]
    return DirichletCharacter.build(N, 2, exps)


def multiply(chi: DirichletCharacter, psi: DirichletCharacter) -> DirichletCharacter:
    """Pointwise product as a character modulo lcm of the moduli."""
    M = _lcm(chi.modulus, psi.modulus)
    L = _lcm(chi.order, psi.order)
    a, b = L // chi.order, L // psi.order
    exps = []
    for n in range(M):
        u, v = chi.exps[n % chi.modulus], psi.exps[n % psi.modulus]
        exps.append(None if u is None or v is None else u * a + v * b)
    return DirichletCharacter.build(M, L, exps)


def induce(chi: DirichletCharacter, M: int) -> DirichletCharacter:
    return chi.induce(M)


def primitive_part(chi: DirichletCharacter) -> DirichletCharacter:
    return chi.primitive_part()


def galois_conjugate(chi: DirichletCharacter, t: int) -> DirichletCharacter:
    return chi.galois_conjugate(t)


def parity(chi: DirichletCharacter) -> int:
    return chi.parity


def is_principal(chi: DirichletCharacter) -> bool:
    return chi.is_principal


@lru_cache(maxsize=None)
def character_group(N: int) -> tuple[DirichletCharacter, ...]:
    """All Dirichlet characters modulo N, principal first."""
    gens = unit_group_generators(N)
    if not gens:
        return (DirichletCharacter.principal(N),)
    out = []
    for choice in product(*(range(order) for _, order in gens)):
        images = {g: (order, j) for (g, order), j in zip(gens, choice)}
        out.append(DirichletCharacter.from_images(N, images))
    return tuple(out)


@lru_cache(maxsize=None)
def primitive_characters(N: int) -> tuple[DirichletCharacter, ...]:
    return tuple(chi for chi in character_group(N) if chi.is_primitive)
