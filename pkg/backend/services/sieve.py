from typing import Iterator, List
import logging
import math

import numpy as np

logger = logging.getLogger(__name__)


def simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def iter_odd_primes(limit: int, segment_odd_count: int = 1_000_000) -> Iterator[int]:
    """Odd primes <= limit in increasing order from an odd-only segmented sieve"""
    base = simple_sieve(math.isqrt(limit) + 1)
    span = 2 * segment_odd_count
    low = 3
    while low <= limit:
        high = min(low + span, limit + 1)
        mask = np.ones((high - low + 1) // 2, dtype=bool)
        for p in base[1:]:
            p = int(p)
            p2 = p * p
            if p2 >= high:
                break
            start = max(p2, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start >= high:
                continue
            mask[(start - low) // 2::p] = False
        for idx in np.flatnonzero(mask):
            yield low + 2 * int(idx)
        low = high


def primes_one_mod_four(x_max: int) -> List[int]:
    primes = [p for p in iter_odd_primes(x_max) if p % 4 == 1]
    logger.debug(f"Sieved {len(primes)} primes p = 1 mod 4 up to {x_max}")
    return primes
