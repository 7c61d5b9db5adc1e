"""Quadratic and quartic residue symbols over Q and over M_q."""
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union
import logging

from sympy import isprime
from sympy.functions.combinatorial.numbers import jacobi_symbol
from sympy.ntheory import sqrt_mod

from ..errors import RamifiedPrimeError
from .ideals import (
    PrimeIdeal,
    ResidueFieldElement,
    conjugate_prime,
    factor_principal,
    ideal_from_element,
    ideal_sum_coprime,
    primes_above,
    reduce,
)
from .ring_mq import (
    SUBFIELD_GENERATOR,
    MqElement,
    QuadElement,
    Subfield,
    galois_apply,
    get_context,
    norm_to_q,
)

logger = logging.getLogger(__name__)


class SymbolValue(Enum):
    """Values in {0} and mu_4; nonzero members store the exponent of i"""
    ZERO = -1
    ONE = 0
    I = 1
    MINUS_ONE = 2
    MINUS_I = 3

    def __mul__(self, other: "SymbolValue") -> "SymbolValue":
        if not isinstance(other, SymbolValue):
            return NotImplemented
        if self is SymbolValue.ZERO or other is SymbolValue.ZERO:
            return SymbolValue.ZERO
        return SymbolValue((self.value + other.value) % 4)

    def __pow__(self, exponent: int) -> "SymbolValue":
        if self is SymbolValue.ZERO:
            if exponent <= 0:
                raise ZeroDivisionError("zero symbol raised to a non-positive power")
            return self
        return SymbolValue((self.value * exponent) % 4)

    def inverse(self) -> "SymbolValue":
        if self is SymbolValue.ZERO:
            raise ZeroDivisionError("zero symbol has no inverse")
        return SymbolValue((-self.value) % 4)

    def conjugate(self) -> "SymbolValue":
        if self is SymbolValue.ZERO:
            return self
        return SymbolValue((-self.value) % 4)

    @classmethod
    def from_int(cls, n: int) -> "SymbolValue":
        if n == 0:
            return cls.ZERO
        if n == 1:
            return cls.ONE
        if n == -1:
            return cls.MINUS_ONE
        raise ValueError(f"{n} is not a symbol value")

    def to_int(self) -> int:
        if self is SymbolValue.ZERO:
            return 0
        if self is SymbolValue.ONE:
            return 1
        if self is SymbolValue.MINUS_ONE:
            return -1
        raise ValueError(f"{self.name} is not real")

    def to_gaussian(self) -> Tuple[int, int]:
        return {
            SymbolValue.ZERO: (0, 0),
            SymbolValue.ONE: (1, 0),
            SymbolValue.I: (0, 1),
            SymbolValue.MINUS_ONE: (-1, 0),
            SymbolValue.MINUS_I: (0, -1),
        }[self]


Denominator = Union[MqElement, PrimeIdeal, Sequence[Tuple[PrimeIdeal, int]]]


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    return int(jacobi_symbol(a % n, n))


def quadratic_rational(a: int, p: int) -> SymbolValue:
    if p == 2 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")
    return SymbolValue.from_int(jacobi(a, p))


def _match_mu4(x: ResidueFieldElement, s_i: ResidueFieldElement) -> SymbolValue:
    one = ResidueFieldElement(x.p, x.d, 1)
    for value, image in (
        (SymbolValue.ONE, one),
        (SymbolValue.MINUS_ONE, -one),
        (SymbolValue.I, s_i),
        (SymbolValue.MINUS_I, -s_i),
    ):
        if x == image:
            return value
    raise ArithmeticError(f"{x} is not a fourth root of unity mod {x.p}")


def quartic_rational(a: int, p: int, s_i: Optional[int] = None) -> SymbolValue:
    """(a/p)_4 for p = 1 mod 4, with i identified with s_i (default the smaller root of -1)"""
    if p % 4 != 1 or not isprime(p):
        raise ValueError(f"quartic symbol over Q needs a prime p = 1 mod 4, got {p}")
    if s_i is None:
        s_i = _smaller_root(p)
    if s_i * s_i % p != p - 1:
        raise ValueError(f"{s_i} is not a square root of -1 mod {p}")
    if a % p == 0:
        return SymbolValue.ZERO
    x = ResidueFieldElement(p, 0, pow(a % p, (p - 1) // 4, p))
    return _match_mu4(x, ResidueFieldElement(p, 0, s_i))


def _smaller_root(p: int) -> int:
    r = sqrt_mod(p - 1, p)
    return min(r, p - r)


def power_residue_prime(a: MqElement, prime: PrimeIdeal, n: int) -> SymbolValue:
    if n not in (2, 4):
        raise ValueError(f"only quadratic and quartic symbols are supported, got n={n}")
    r = reduce(a, prime)
    if r.is_zero():
        return SymbolValue.ZERO
    return _match_mu4(r ** ((prime.norm - 1) // n), prime.s_i)


def _factorization(b: Denominator) -> List[Tuple[PrimeIdeal, int]]:
    if isinstance(b, MqElement):
        return factor_principal(b)
    if isinstance(b, PrimeIdeal):
        return [(b, 1)]
    return list(b)


def power_residue(a: MqElement, b: Denominator, n: int) -> SymbolValue:
    """(a/b)_n extended multiplicatively over the prime factorization of b"""
    result = SymbolValue.ONE
    for prime, exponent in _factorization(b):
        result = result * power_residue_prime(a, prime, n) ** exponent
        if result is SymbolValue.ZERO:
            break
    return result


def reciprocity_ratio(a: MqElement, b: MqElement) -> SymbolValue:
    for x in (a, b):
        n = norm_to_q(x)
        if n % 2 == 0 or n % x.q == 0:
            raise RamifiedPrimeError(f"{x} is not coprime to {2 * x.q}")
    if not ideal_sum_coprime(ideal_from_element(a), ideal_from_element(b)):
        raise ValueError(f"{a} and {b} are not coprime")
    return power_residue(a, b, 4) * power_residue(b, a, 4).inverse()


def _extended_ideal(prime: PrimeIdeal, subfield: Subfield) -> Tuple[List[PrimeIdeal], bool]:
    """Primes of M_q over the subfield prime below `prime`, and whether it splits"""
    image = conjugate_prime(prime, SUBFIELD_GENERATOR[subfield])
    if image.lattice == prime.lattice:
        return [prime], False
    return [prime, image], True


def descend_to_subfield(b: MqElement, prime: PrimeIdeal, subfield: Subfield) -> QuadElement:
    """An element of the subfield congruent to b modulo the extension of the prime below `prime`.

    Needs b = psi(b) modulo that ideal, psi generating Gal(M_q / subfield).
    """
    psi = SUBFIELD_GENERATOR[subfield]
    primes, _ = _extended_ideal(prime, subfield)
    image = galois_apply(psi, b)
    if any(not x.contains(b - image) for x in primes):
        raise ValueError(f"{b} is not fixed by {psi.name} modulo the primes above {prime.p}")
    half = (prime.p + 1) // 2
    lowered = QuadElement.from_mq((b + image) * half, subfield)
    return QuadElement(subfield, lowered.x % prime.p, lowered.y % prime.p)


class LoweringMode(str, Enum):
    SPLIT = "SPLIT"
    INERT = "INERT"


DEFAULT_LOWERING_SAMPLES = ((2, 0), (3, 0), (1, 1), (5, 2), (7, -3), (11, 4))


def lowering_check(
    prime: PrimeIdeal,
    mode: LoweringMode,
    subfield: Subfield = Subfield.GAUSS,
    samples: Optional[Iterable[Tuple[int, int]]] = None,
) -> bool:
    """Compare the quartic symbol at the extended subfield prime with its subfield counterpart.

    Split with i in the subfield: quartic symbol equals the quadratic symbol over the subfield.
    Split otherwise: the quartic symbol is 1. Inert: quartic symbol equals the quadratic symbol
    to the power (p + 1) / 2.
    """
    primes, splits = _extended_ideal(prime, subfield)
    actual = LoweringMode.SPLIT if splits else LoweringMode.INERT
    if actual != mode:
        raise ValueError(f"the prime below {prime} is {actual.value} in M_{prime.q}, not {mode.value}")
    if (splits and prime.f != 1) or (not splits and prime.f != 2):
        raise ValueError(f"the prime below {prime} does not have degree 1")

    for x, y in samples or DEFAULT_LOWERING_SAMPLES:
        alpha = QuadElement(subfield, x, y).to_mq(prime.q)
        r = reduce(alpha, prime)
        if r.is_zero():
            continue
        if not r.is_prime_field():
            raise ArithmeticError(f"{alpha} does not reduce into F_{prime.p}")
        quadratic = quadratic_rational(r.a, prime.p)
        lhs = power_residue(alpha, [(x_prime, 1) for x_prime in primes], 4)
        if mode == LoweringMode.INERT:
            rhs = quadratic ** ((prime.p + 1) // 2)
        elif subfield == Subfield.GAUSS:
            rhs = quadratic
        else:
            rhs = SymbolValue.ONE
        if lhs != rhs:
            logger.warning(f"Lowering mismatch at {prime} for {alpha}: {lhs.name} != {rhs.name}")
            return False
    return True


def split_completely(q: int, p: int) -> bool:
    """p = 1 mod 4 with q a square mod p"""
    return p % 4 == 1 and jacobi(q, p) == 1


def degree_one_primes(q: int, p: int) -> Tuple[PrimeIdeal, ...]:
    primes = primes_above(get_context(q), p)
    if primes[0].f != 1:
        raise ValueError(f"p={p} does not split completely in M_{q}")
    return primes
