"""Prime tables for the sieve-heavy paths."""
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def _sieve(n: int) -> np.ndarray:
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return is_p


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(_sieve(int(n))).astype(np.int64)


def first_primes(count: int) -> list[int]:
    bound = 16
    while True:
        ps = primes_upto(bound)
        if len(ps) >= count:
            return [int(p) for p in ps[:count]]
        bound *= 2
