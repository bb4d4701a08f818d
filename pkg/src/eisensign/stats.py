"""Sign statistics of Eisenstein newform eigenvalues.

Everything here reduces to counting values of quadratic characters: the
sign of sigma(n) for n prime to the level is chi2(n), and at a prime p the
sign is chi1(p) when p | D2 and chi2(p) otherwise.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product
from math import gcd

import numpy as np

from .chars import DirichletCharacter, enumerate_fundamental, kronecker
from .errors import EisenError, NotQuadraticError
from .primes import first_primes, primes_upto

DIGITS = 30


def to_decimal(q: Fraction, digits: int = DIGITS) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        return Decimal(q.numerator) / Decimal(q.denominator)


@dataclass(frozen=True)
class SignPattern:
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("sign pattern must be nonempty")
        ps = [p for p, _ in self.entries]
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise ValueError("primes must be strictly increasing")
        for p, e in self.entries:
            if e not in (-1, 0, 1):
                raise ValueError(f"sign {e} not in {{-1, 0, 1}}")
            if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
                raise ValueError(f"{p} is not prime")

    @classmethod
    def parse(cls, text: str) -> SignPattern:
        """"3:-1,5:0" -> [(3, -1), (5, 0)]."""
        entries = []
        for item in text.split(","):
            p, e = item.split(":")
            entries.append((int(p), int(e)))
        return cls(tuple(entries))

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.entries]

    @property
    def signs(self) -> list[int]:
        return [e for _, e in self.entries]

    def __str__(self):
        return ",".join(f"{p}:{e}" for p, e in self.entries)


@dataclass(frozen=True)
class DensityReport:
    sample_size: int
    hits: int
    predicted: Fraction
    label: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def empirical(self) -> Fraction:
        return Fraction(self.hits, self.sample_size) if self.sample_size else Fraction(0)

    def abs_error(self, digits: int = DIGITS) -> Decimal:
        return to_decimal(abs(self.empirical - self.predicted), digits)

    def to_dict(self, digits: int = DIGITS) -> dict:
        out = {
            "label": self.label,
            "sample_size": self.sample_size,
            "hits": self.hits,
            "empirical": str(to_decimal(self.empirical, digits)),
            "predicted": str(self.predicted),
            "abs_error": str(self.abs_error(digits)),
        }
        out.update({k: str(v) if isinstance(v, (Fraction, Decimal)) else v for k, v in self.extra.items()})
        return out

    def csv_row(self, x, digits: int = DIGITS) -> list[str]:
        return [str(x), str(to_decimal(self.empirical, digits)), str(to_decimal(self.predicted, digits)),
                str(self.abs_error(digits))]


CSV_HEADER = ["x", "empirical", "predicted", "abs_error"]


def _blocks(n: int, threads: int, minimum: int = 1 << 16) -> list[tuple[int, int]]:
    size = max(minimum, -(-n // max(1, threads * 4)))
    return [(i, min(n, i + size)) for i in range(0, n, size)]


def _parallel_sum(fn, ranges, threads: int):
    """Sum integer tuples from fn over ranges; merge order is fixed."""
    if threads <= 1 or len(ranges) <= 1:
        parts = [fn(a, b) for a, b in ranges]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda r: fn(*r), ranges))
    return tuple(sum(col) for col in zip(*parts)) if parts else ()


# -- probabilities -----------------------------------------------------------------

def prob_epsilon(eps: int, p: int) -> Fraction:
    """Limiting share of fundamental discriminants D with (D/p) = eps."""
    if eps == 0:
        return Fraction(1, p + 1)
    if eps in (1, -1):
        return Fraction(p, 2 * p + 2)
    raise ValueError(f"eps must be -1, 0 or 1, got {eps}")


def predicted_census(pattern: SignPattern) -> Fraction:
    out = Fraction(1)
    for p, e in pattern.entries:
        out *= Fraction(1, (p + 1) ** 2) if e == 0 else Fraction(p * (p + 2), 2 * (p + 1) ** 2)
    return out


# -- vectorised Kronecker columns ----------------------------------------------------

def kronecker_column(Ds: np.ndarray, p: int) -> np.ndarray:
    """(D/p) for every D in Ds, as int8."""
    m = 8 if p == 2 else p
    table = np.array([kronecker(r, p) for r in range(m)], dtype=np.int8)
    return table[np.asarray(Ds) % m]


def kronecker_proportion(eps: int, p: int, x: int) -> DensityReport:
    """Share of real-quadratic fundamental D <= x with (D/p) = eps."""
    Ds = enumerate_fundamental(x)
    hits = int(np.count_nonzero(kronecker_column(Ds, p) == eps))
    return DensityReport(len(Ds), hits, prob_epsilon(eps, p), label=f"(D/{p})={eps}, D<={x}")


def fundamental_count(x: int) -> dict:
    """Count of 1 < D <= x against the two candidate normalisations."""
    n = len(enumerate_fundamental(x))
    zeta2 = math.pi**2 / 6
    return {"x": x, "count": n, "ratio": n / x, "one_over_zeta2": 1 / zeta2, "half_over_zeta2": 0.5 / zeta2}


# -- densities over integers -----------------------------------------------------------

def sign_density(chi1: DirichletCharacter, chi2: DirichletCharacter, k: int, x: int,
                 sign: int = -1, threads: int = 1) -> DensityReport:
    """Share of n <= x, gcd(n, N) = 1, with sign(sigma(n)) = sign.

    ``sample_size`` counts the coprime n; ``extra['per_integer']`` carries
    hits / x for the other normalisation.
    """
    if not (chi1.is_quadratic and chi2.is_quadratic):
        raise NotQuadraticError("sign_density needs quadratic characters")
    N = chi1.modulus * chi2.modulus
    coprime = np.array([gcd(r, N) == 1 for r in range(N)], dtype=bool)
    vals = np.array([chi2(r) for r in range(N)], dtype=np.int8)

    def count(a, b):
        r = np.arange(a + 1, b + 1, dtype=np.int64) % N
        c = coprime[r]
        return int(np.count_nonzero(c)), int(np.count_nonzero(c & (vals[r] == sign)))

    total, hits = _parallel_sum(count, _blocks(x, threads), threads) or (0, 0)
    return DensityReport(total, hits, Fraction(1, 2), label=f"sign={sign}, x={x}",
                         extra={"per_integer": Fraction(hits, x), "x": x})


def first_negative(chi1: DirichletCharacter, chi2: DirichletCharacter, k: int) -> int:
    """Least prime p prime to the level with chi2(p) = -1."""
    if not (chi1.is_quadratic and chi2.is_quadratic):
        raise NotQuadraticError("first_negative needs quadratic characters")
    if chi2.is_principal:
        raise EisenError("chi2 is principal: sigma never changes sign")
    N = chi1.modulus * chi2.modulus
    bound = 64
    while True:
        for p in primes_upto(bound):
            p = int(p)
            if N % p and chi2(p) == -1:
                return p
        bound *= 4


def first_negative_scan(X: int) -> dict:
    """p0(D) for chi1 principal, chi2 = (D/.) over fundamental 1 < D <= X."""
    Ds = enumerate_fundamental(X)
    p0 = np.zeros(len(Ds), dtype=np.int64)
    todo = np.arange(len(Ds))
    bound = 256
    while len(todo):
        for p in primes_upto(bound):
            if not len(todo):
                break
            col = kronecker_column(Ds[todo], int(p))
            hit = col == -1
            p0[todo[hit]] = p
            todo = todo[~hit]
        bound *= 4
        if bound > 1 << 24:
            raise RuntimeError("no non-residue found; impossible for fundamental D")
    ratio = np.log(p0) / np.log(Ds)
    i = int(np.argmax(ratio))
    return {"X": X, "count": len(Ds), "max_ratio": float(ratio[i]), "argmax_D": int(Ds[i]),
            "p0_at_argmax": int(p0[i]), "max_p0": int(p0.max()),
            "burgess_exponent": 1 / (4 * math.sqrt(math.e)), "p0": p0, "Ds": Ds}


# -- discriminant-pair census ------------------------------------------------------------

def _census_tables(x: int, primes: list[int], include_one: bool):
    lo = 1 if include_one else 5
    Ds = enumerate_fundamental(max(x // lo, 1), include_one=include_one)
    cols = np.stack([kronecker_column(Ds, p) for p in primes], axis=1) if len(Ds) else np.zeros((0, len(primes)), np.int8)
    return Ds, cols


def census(pattern: SignPattern, x: int, include_one: bool = False, threads: int = 1) -> DensityReport:
    """Share of pairs (D1, D2), D1 D2 <= x, whose sign at each p_i equals eps_i.

    Sign at p is (D1/p) when p | D2 and (D2/p) otherwise.  Pairs are counted
    exactly: D2 are bucketed by their Kronecker vector, and for each D1 the
    compatible buckets are counted by binary search.
    """
    primes, signs = pattern.primes, np.array(pattern.signs, dtype=np.int8)
    Ds, cols = _census_tables(x, primes, include_one)
    lo = 1 if include_one else 5
    n1 = int(np.searchsorted(Ds, x // lo, side="right"))
    classes = list(product((-1, 0, 1), repeat=len(primes)))
    buckets = []
    for c in classes:
        mask = np.all(cols == np.array(c, dtype=np.int8), axis=1)
        buckets.append((np.array(c, dtype=np.int8), Ds[mask]))

    def count(a, b):
        D1 = Ds[a:b]
        y = x // D1
        v1 = cols[a:b]
        total = int(np.searchsorted(Ds, y, side="right").sum())
        hits = 0
        for c, members in buckets:
            if not len(members):
                continue
            fixed = c != 0
            if np.any(fixed & (c != signs)):
                continue
            # where p | D2 the sign comes from D1
            ok = np.all((v1 == signs)[:, ~fixed], axis=1)
            if ok.any():
                hits += int(np.searchsorted(members, y[ok], side="right").sum())
        return total, hits

    total, hits = _parallel_sum(count, _blocks(n1, threads, minimum=1 << 14), threads) or (0, 0)
    return DensityReport(total, hits, predicted_census(pattern),
                         label=f"pattern={pattern}, x={x}, include_one={include_one}",
                         extra={"x": x, "include_one": include_one})


def pair_count(x: int, include_one: bool = False) -> int:
    lo = 1 if include_one else 5
    Ds = enumerate_fundamental(max(x // lo, 1), include_one=include_one)
    n1 = int(np.searchsorted(Ds, x // lo, side="right"))
    return int(np.searchsorted(Ds, x // Ds[:n1], side="right").sum())


# -- theta and eta ---------------------------------------------------------------------

def theta_partial(L: int) -> Fraction:
    """Exact partial sum of theta over the first L primes."""
    total = Fraction(0)
    carry = Fraction(1)
    for p in first_primes(L):
        total += carry * Fraction(p * p * (p + 2), 2 * (p + 1) ** 2)
        carry *= Fraction(2 + p * (p + 2), 2 * (p + 1) ** 2)
    return total


def theta_constant(L: int, digits: int = DIGITS) -> Decimal:
    if L < 1:
        raise ValueError("L must be >= 1")
    return to_decimal(theta_partial(L), digits)


@dataclass(frozen=True)
class EtaReport:
    x: int
    pairs: int
    resolved: int
    eta_sum: int
    unresolved: int
    scan_primes: int
    include_one: bool

    @property
    def mean(self) -> Fraction:
        return Fraction(self.eta_sum, self.resolved) if self.resolved else Fraction(0)

    def to_dict(self, digits: int = DIGITS) -> dict:
        return {"x": self.x, "pairs": self.pairs, "resolved": self.resolved, "unresolved": self.unresolved,
                "eta_sum": self.eta_sum, "mean": str(to_decimal(self.mean, digits)),
                "scan_primes": self.scan_primes, "include_one": self.include_one}


def average_eta(x: int, include_one: bool = False, scan_primes: int = 25, threads: int = 1) -> EtaReport:
    """Mean least prime with census sign -1 over pairs D1 D2 <= x.

    Pairs with no such prime among the first ``scan_primes`` primes are
    counted in ``unresolved`` and excluded from the mean.
    """
    if x < 25:
        raise ValueError("x must be >= 25")
    primes = np.array(first_primes(scan_primes), dtype=np.int64)
    Ds, cols = _census_tables(x, [int(p) for p in primes], include_one)
    lo = 1 if include_one else 5
    n1 = int(np.searchsorted(Ds, x // lo, side="right"))

    def work(a, b):
        pairs = resolved = eta_sum = 0
        for i in range(a, b):
            n2 = int(np.searchsorted(Ds, x // int(Ds[i]), side="right"))
            v2 = cols[:n2]
            s = np.where(v2 == 0, cols[i], v2)
            neg = s == -1
            found = neg.any(axis=1)
            first = np.argmax(neg, axis=1)
            pairs += n2
            resolved += int(found.sum())
            eta_sum += int(primes[first[found]].sum())
        return pairs, resolved, eta_sum

    pairs, resolved, eta_sum = _parallel_sum(work, _blocks(n1, threads, minimum=256), threads) or (0, 0, 0)
    return EtaReport(x, pairs, resolved, eta_sum, pairs - resolved, scan_primes, include_one)


# -- prime race ------------------------------------------------------------------------

def prime_race(chi2: DirichletCharacter, X: int, points: int = 200) -> dict:
    """S(y) = sum_{p <= y} chi2(p) on a log-spaced grid of y <= X."""
    if not chi2.is_quadratic or chi2.is_principal:
        raise NotQuadraticError("prime_race needs a non-principal quadratic character")
    ps = primes_upto(X)
    vals = chi2.table[ps % chi2.modulus].astype(np.int64)
    cum = np.cumsum(vals)
    grid = sorted({int(round(v)) for v in np.exp(np.linspace(math.log(2), math.log(max(X, 2)), points))})
    series = []
    for y in grid:
        i = int(np.searchsorted(ps, y, side="right"))
        series.append((y, int(cum[i - 1]) if i else 0))
    neg = sum(1 for _, s in series if s < 0)
    N2 = chi2.conductor
    return {"series": series, "negative_fraction": Fraction(neg, len(series)),
            "predicted_bias": 0.5 + math.sqrt(2 / (math.pi * math.log(N2))) if N2 > 1 else None}


def character_sum_primes(chi2: DirichletCharacter, y: int) -> int:
    ps = primes_upto(y)
    return int(sum(chi2(int(p)) for p in ps))
