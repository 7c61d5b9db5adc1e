"""Class numbers of imaginary quadratic fields by counting reduced forms.

This is the independent oracle the criterion is checked against, so it
uses none of the symbol machinery.
"""
from dataclasses import dataclass
from typing import Iterator, List
import logging
import math

import numpy as np
from sympy import factorint

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        if not (abs(self.b) <= self.a <= self.c):
            return False
        if self.b < 0 and (abs(self.b) == self.a or self.a == self.c):
            return False
        return True

    def is_ambiguous(self) -> bool:
        return self.b == 0 or self.a == self.b or self.a == self.c


@dataclass(frozen=True)
class TwoPartProfile:
    k_max: int
    h: int


def is_fundamental(d: int) -> bool:
    if d >= 0:
        return False
    n = -d
    if d % 4 == 1:
        core = n
    elif d % 4 == 0 and (n // 4) % 4 in (1, 2):
        # d/4 = 2 or 3 mod 4
        core = n // 4
    else:
        return False
    return all(e == 1 for e in factorint(core).values())


def _check_discriminant(d: int):
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative discriminant")
    if not is_fundamental(d):
        raise ValueError(f"{d} is not a fundamental discriminant")


def reduced_forms(d: int) -> Iterator[QuadraticForm]:
    _check_discriminant(d)
    n = -d
    for b in range(-math.isqrt(n // 3), math.isqrt(n // 3) + 1):
        if (b - d) % 2:
            continue
        ac = (b * b + n) // 4
        for a in range(max(abs(b), 1), math.isqrt(ac) + 1):
            if ac % a == 0:
                form = QuadraticForm(a, b, ac // a)
                if form.is_reduced():
                    yield form


def count_reduced_forms(d: int) -> int:
    return sum(1 for _ in reduced_forms(d))


def class_number(d: int) -> int:
    """h(d) from the non-negative half of the b-range, doubling forms whose negation is also reduced"""
    _check_discriminant(d)
    n = -d
    h = 0
    for b in range(n % 2, math.isqrt(n // 3) + 1, 2):
        ac = (b * b + n) // 4
        a = np.arange(max(b, 1), math.isqrt(ac) + 1, dtype=np.int64)
        a = a[ac % a == 0]
        if a.size == 0:
            continue
        if b == 0:
            h += int(a.size)
            continue
        boundary = (a == b) | (a == ac // a)
        h += int(boundary.sum()) + 2 * int((~boundary).sum())
    return h


def ambiguous_count(d: int) -> int:
    return sum(1 for form in reduced_forms(d) if form.is_ambiguous())


def two_adic_valuation(n: int) -> int:
    if n <= 0:
        raise ValueError(f"2-adic valuation needs a positive integer, got {n}")
    return (n & -n).bit_length() - 1


def two_part_profile(q: int, p: int) -> TwoPartProfile:
    h = class_number(-q * p)
    return TwoPartProfile(k_max=min(two_adic_valuation(h), 4), h=h)
