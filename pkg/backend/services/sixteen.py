"""The 16-rank criterion for h(-qp) and the symbols on M_q that lift it.

e_p is computed with rational arithmetic only (square roots mod p, Jacobi
symbols, modular powers). a_ideal reaches the same value through the
quartic symbol of M_q and serves as an independent second route.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple
import logging
import math

from sympy import isprime
from sympy.ntheory import sqrt_mod

from ..arithmetic.ideals import PrimeIdeal, find_generator, ideal_from_element, ideal_sum_coprime
from ..arithmetic.ring_mq import (
    PUBLISHED_UNIT_ROWS,
    GaloisElement,
    MqElement,
    QContext,
    Subfield,
    galois_apply,
    get_context,
    norm_to_q,
    norm_to_subfield,
    order_discriminant_check,
    u_part,
)
from ..arithmetic.symbols import SymbolValue, jacobi, power_residue, quartic_rational
from ..errors import CriterionAssertion, DegenerateSymbol, RamifiedPrimeError
from ..models import EpRecord, UnitTableRow
from .classgroup import two_adic_valuation, two_part_profile

logger = logging.getLogger(__name__)

# (u, v) -> (u', v') mod 4 under multiplication by eps * sigma(eps)
PUBLISHED_ORBIT_MAPS = {
    3: ((2, -3), (-1, 2)),
    11: ((2, -3), (-1, 2)),
    19: ((2, -3), (-1, 2)),
    163: ((2, -3), (-1, 2)),
    7: ((0, 1), (3, 0)),
    43: ((2, 3), (1, 2)),
    67: ((2, 3), (1, 2)),
}


def _check_prime(q: int, p: int):
    if p % 4 != 1 or not isprime(p):
        raise ValueError(f"p must be a prime = 1 mod 4, got {p}")
    if p == q:
        raise RamifiedPrimeError(f"p = q = {q}")


def _isqrt_exact(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else -1


def solve_norm_equation(p: int, q: int) -> Tuple[int, int]:
    """Positive (u, v) with u^2 - q v^2 = p.

    Walks the continued fraction cycle of (r + sqrt(q)) / p, r^2 = q mod p,
    carrying the representation until it reaches the principal form.
    """
    if p % 2 == 0 or jacobi(q, p) != 1:
        raise ValueError(f"{q} is not a square mod {p}")
    s = math.isqrt(q)
    r = sqrt_mod(q % p, p)
    limit = 64 * p.bit_length() + 1000
    for start in sorted({min(r, p - r), max(r, p - r)}):
        big_p, big_q = start, p
        g_prev, g = -start, p
        b_prev, b = 1, 0
        for _ in range(limit):
            a = (big_p + s) // big_q if big_q > 0 else (big_p + s + 1) // big_q
            g_prev, g = g, a * g + g_prev
            b_prev, b = b, a * b + b_prev
            big_p = a * big_q - big_p
            big_q = (q - big_p * big_p) // big_q
            if g * g - q * b * b == p:
                return abs(g), abs(b)
    raise ArithmeticError(f"no representation of {p} by u^2 - {q}v^2 found")


def solve_norm_equation_bruteforce(p: int, q: int) -> Tuple[int, int]:
    v = 0
    while True:
        u = _isqrt_exact(p + q * v * v)
        if u >= 0:
            return u, v
        v += 1


def orbit_step(q: int, uv: Tuple[int, int]) -> Tuple[int, int]:
    (a, b), (c, d) = PUBLISHED_ORBIT_MAPS[q]
    u, v = uv
    return (a * u + b * v) % 4, (c * u + d * v) % 4


def _valid_residue_pairs() -> List[Tuple[int, int]]:
    # u^2 - q v^2 = 1 mod 4 with q = 3 mod 4: exactly one of u, v is odd
    return [(u, v) for u in range(4) for v in range(4) if (u + v) % 2 == 1]


def orbit_check(ctx: QContext) -> bool:
    """The published map agrees with eps*sigma(eps) mod 4 and every orbit has length 4
    with exactly one u = 1 mod 4"""
    (x, qy), (y, _) = ctx.orbit_matrix
    for pair in _valid_residue_pairs():
        u, v = pair
        derived = ((x * u + qy * v) % 4, (y * u + x * v) % 4)
        if derived != orbit_step(ctx.q, pair):
            return False
    for pair in _valid_residue_pairs():
        orbit = [pair]
        while len(orbit) <= 4:
            nxt = orbit_step(ctx.q, orbit[-1])
            if nxt == pair:
                break
            orbit.append(nxt)
        if len(orbit) != 4 or sum(1 for u, _ in orbit if u == 1) != 1:
            return False
    return True


def normalize_u(q: int, uv: Tuple[int, int]) -> Tuple[int, int]:
    ctx = get_context(q)
    ese = ctx.eps_sigma_eps
    x, y = ese.x, ese.y
    u, v = abs(uv[0]), abs(uv[1])
    n = u * u - q * v * v
    for _ in range(4):
        if u % 4 == 1:
            if u * u - q * v * v != n:
                raise ArithmeticError(f"normalization changed the norm of ({uv[0]}, {uv[1]})")
            return u, abs(v)
        u, v = x * u + q * y * v, y * u + x * v
    raise ArithmeticError(f"no u = 1 mod 4 in the orbit of {uv} for q={q}")


def _criterion(q: int, p: int) -> Tuple[int, int, int, int, int]:
    """(chi, chi4, u, v, e) with 0 standing for NA"""
    chi = jacobi(-q, p)
    if chi == -1:
        return chi, 0, 0, 0, 0
    u, v = normalize_u(q, solve_norm_equation(p, q))
    chi4 = quartic_rational(-q, p).to_int()
    if chi4 != 1:
        return chi, chi4, u, v, 0
    if jacobi(u, p) != 1:
        raise CriterionAssertion(q, p, f"(u/p) = -1 for u = {u}")
    quartic = quartic_rational(u, p).to_int()
    return chi, chi4, u, v, 1 if quartic == jacobi(2, u) else -1


def e_p(q: int, p: int) -> int:
    _check_prime(q, p)
    return _criterion(q, p)[4]


def rank_profile(q: int, p: int) -> Tuple[bool, bool, bool]:
    """Predicted (4 | h, 8 | h, 16 | h) for h = h(-qp)"""
    _check_prime(q, p)
    chi, chi4, _, _, e = _criterion(q, p)
    return chi == 1, chi == 1 and chi4 == 1, e == 1


def ep_record(q: int, p: int, with_oracle: bool = False) -> EpRecord:
    _check_prime(q, p)
    chi, chi4, u, v, e = _criterion(q, p)
    fields: Dict[str, object] = {'q': q, 'p': p, 'chi': chi, 'e': e}
    if chi == 1:
        fields.update(chi4=chi4, u=u, v=v)
    if with_oracle:
        profile = two_part_profile(q, p)
        record = EpRecord(**fields)
        fields.update(
            h=profile.h,
            v2h=two_adic_valuation(profile.h),
            agree=record.predicted_k == profile.k_max,
        )
    return EpRecord(**fields)


def oracle_e(h: int) -> int:
    k = min(two_adic_valuation(h), 4)
    return {4: 1, 3: -1}.get(k, 0)


def unit_coeff_check(ctx: QContext) -> bool:
    a, b = ctx.coeff_ab
    return (2 * a, 2 * ctx.q * b) == PUBLISHED_UNIT_ROWS[ctx.q]


def unit_table_row(q: int) -> UnitTableRow:
    ctx = get_context(q)
    ese = ctx.eps_sigma_eps
    a, b = ctx.coeff_ab
    return UnitTableRow(
        q=q,
        eps=ctx.eps.coords,
        eps_sigma_eps=(ese.x, ese.y),
        coeff_row=(2 * a, 2 * q * b),
        coeff_ok=unit_coeff_check(ctx),
        orbit_matrix=ctx.orbit_matrix,
        orbit_ok=orbit_check(ctx),
        discriminant_ok=order_discriminant_check(q),
    )


def _u_of(w: MqElement) -> int:
    return u_part(norm_to_subfield(w, Subfield.REAL))


def _check_coprime(w: MqElement):
    n = norm_to_q(w)
    if n % 2 == 0 or n % w.q == 0:
        raise RamifiedPrimeError(f"{w} is not coprime to {2 * w.q}")


def s_indicator(w: MqElement) -> int:
    return 1 if _u_of(w) % 4 == 1 else 0


def bracket(w: MqElement) -> SymbolValue:
    _check_coprime(w)
    u = _u_of(w)
    if u % 2 == 0:
        return SymbolValue.ZERO
    quartic = power_residue(MqElement.from_int(w.q, u), w, 4)
    return quartic * SymbolValue.from_int(jacobi(2, u))


def q2_factor(w: MqElement, z: MqElement) -> int:
    _check_coprime(w)
    _check_coprime(z)
    result = 1
    for u in (_u_of(w), _u_of(z), _u_of(w * z)):
        if u % 2 == 0:
            return 0
        result *= jacobi(2, u)
    return result


def twisted_ratio(w: MqElement, z: MqElement) -> SymbolValue:
    """mu_3 in [wz] = mu_3 [w][z] (z / tau(w))_2"""
    for x in (w, z, w * z):
        _check_coprime(x)
    tau_sigma_w = galois_apply(GaloisElement.TAU * GaloisElement.SIGMA, w)
    if not ideal_sum_coprime(ideal_from_element(z), ideal_from_element(tau_sigma_w)):
        raise DegenerateSymbol(f"{z} and tau*sigma({w}) share a prime")
    factors = [
        bracket(w * z),
        bracket(w),
        bracket(z),
        power_residue(z, galois_apply(GaloisElement.TAU, w), 2),
    ]
    if SymbolValue.ZERO in factors:
        raise DegenerateSymbol(f"a symbol vanished for w={w.coords}, z={z.coords}")
    wz, bw, bz, quadratic = factors
    return wz * (bw * bz * quadratic).inverse()


@dataclass(frozen=True)
class HalfGaussian:
    """Exact element of Z[i, 1/2]"""
    re: Fraction
    im: Fraction

    @classmethod
    def zero(cls) -> "HalfGaussian":
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def from_symbol(cls, value: SymbolValue) -> "HalfGaussian":
        re, im = value.to_gaussian()
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "HalfGaussian") -> "HalfGaussian":
        return HalfGaussian(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "HalfGaussian") -> "HalfGaussian":
        return HalfGaussian(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def scale(self, factor: Fraction) -> "HalfGaussian":
        return HalfGaussian(self.re * factor, self.im * factor)

    def to_int(self) -> int:
        if self.im != 0 or self.re.denominator != 1:
            raise ValueError(f"{self} is not a rational integer")
        return int(self.re)


def a_ideal(w: MqElement) -> HalfGaussian:
    """Value of the sequence at the ideal (w)"""
    if w.is_zero():
        raise ValueError("the zero ideal is not indexed")
    if math.gcd(norm_to_q(w), 2 * w.q) != 1:
        return HalfGaussian.zero()
    ctx = get_context(w.q)
    # (-q / eps^i w)_4 depends only on the ideal
    twist = HalfGaussian.from_symbol(power_residue(MqElement.from_int(w.q, -w.q), w, 4))
    weight = (HalfGaussian(Fraction(1), Fraction(0)) + twist).scale(Fraction(1, 2))
    total = HalfGaussian.zero()
    x = w
    for _ in range(4):
        if s_indicator(x):
            total = total + HalfGaussian.from_symbol(bracket(x)) * weight
        x = ctx.eps * x
    return total


def prop31_check(prime: PrimeIdeal, **search) -> bool:
    """a at a degree-1 prime above p equals e_p"""
    if prime.f != 1:
        raise ValueError(f"{prime} is not of degree 1")
    w = find_generator(prime, **search)
    value = a_ideal(w)
    expected = e_p(prime.q, prime.p)
    if value != HalfGaussian(Fraction(expected), Fraction(0)):
        logger.warning(f"a({w.coords}) = {value} but e_{prime.p} = {expected} for q={prime.q}")
        return False
    return True
