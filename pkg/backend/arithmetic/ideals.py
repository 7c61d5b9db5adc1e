"""Prime ideals of M_q above odd unramified primes and their lattices.

An ideal is stored as the Hermite normal form of its Z-lattice in the
coordinates of {1, i, w, i*w}: columns form a basis, the matrix is upper
triangular with positive diagonal.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple
import logging
import math

from sympy import factorint, isprime
from sympy.functions.combinatorial.numbers import jacobi_symbol
from sympy.ntheory import sqrt_mod
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form
from tenacity import Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt

from ..errors import GeneratorNotFound, RamifiedPrimeError
from .lattice import lll_reduce, short_vectors, weight_grid, weighted_metric
from .ring_mq import (
    GaloisElement,
    MqElement,
    QContext,
    basis,
    embeddings,
    galois_apply,
    get_context,
    norm_to_q,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidueFieldElement:
    """a + b*theta in F_p[theta] / (theta^2 - d); b is always 0 when f = 1"""
    p: int
    d: int
    a: int
    b: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    def _lift(self, other) -> "ResidueFieldElement":
        if isinstance(other, ResidueFieldElement):
            return other
        return ResidueFieldElement(self.p, self.d, other)

    def __add__(self, other):
        other = self._lift(other)
        return ResidueFieldElement(self.p, self.d, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return ResidueFieldElement(self.p, self.d, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        return ResidueFieldElement(
            self.p,
            self.d,
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "ResidueFieldElement":
        result = ResidueFieldElement(self.p, self.d, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_prime_field(self) -> bool:
        return self.b == 0


def smallest_nonresidue(p: int) -> int:
    n = 2
    while jacobi_symbol(n, p) != -1:
        n += 1
    return n


def _canonical_sqrt(x: int, p: int) -> int:
    r = sqrt_mod(x % p, p)
    return min(r, p - r)


def residue_sqrt(x: int, p: int, d: int) -> ResidueFieldElement:
    """Square root of a rational residue class inside F_{p^2}"""
    if jacobi_symbol(x % p, p) == 1:
        return ResidueFieldElement(p, d, _canonical_sqrt(x, p))
    return ResidueFieldElement(p, d, 0, _canonical_sqrt(x * pow(d, -1, p), p))


@dataclass(frozen=True)
class IdealLattice:
    hnf: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence[int]]) -> "IdealLattice":
        cols = [tuple(int(x) for x in v) for v in vectors]
        rows = [[ZZ(v[r]) for v in cols] for r in range(4)]
        h = hermite_normal_form(DomainMatrix(rows, (4, len(cols)), ZZ)).to_Matrix()
        if h.shape != (4, 4):
            raise ValueError(f"generators span a lattice of rank {h.shape[1]}, expected 4")
        return cls(tuple(tuple(int(h[r, c]) for c in range(4)) for r in range(4)))

    @property
    def det(self) -> int:
        return math.prod(self.hnf[r][r] for r in range(4))

    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(self.hnf[r][c] for r in range(4)) for c in range(4)]

    def contains(self, vector: Sequence[int]) -> bool:
        x = [int(v) for v in vector]
        for r in range(3, -1, -1):
            pivot = self.hnf[r][r]
            if x[r] % pivot:
                return False
            y = x[r] // pivot
            for rr in range(r + 1):
                x[rr] -= y * self.hnf[rr][r]
        return True


@dataclass(frozen=True)
class PrimeIdeal:
    q: int
    p: int
    f: int
    s_i: ResidueFieldElement
    s_q: ResidueFieldElement
    lattice: IdealLattice

    @property
    def norm(self) -> int:
        return self.p ** self.f

    def contains(self, a: MqElement) -> bool:
        return self.lattice.contains(a.coords)

    def __repr__(self) -> str:
        si = (self.s_i.a, self.s_i.b)
        sq = (self.s_q.a, self.s_q.b)
        return f"PrimeIdeal(q={self.q}, p={self.p}, f={self.f}, i->{si}, sqrt(q)->{sq})"


def _omega_image(q: int, s_i: ResidueFieldElement, s_q: ResidueFieldElement) -> ResidueFieldElement:
    inv2 = pow(2, -1, s_i.p)
    return (s_i * s_q + 1) * inv2


def _reduce_coords(q: int, coords: Sequence[int], s_i: ResidueFieldElement, s_q: ResidueFieldElement) -> ResidueFieldElement:
    w = _omega_image(q, s_i, s_q)
    c0, c1, c2, c3 = coords
    return s_i * c1 + w * c2 + s_i * w * c3 + c0


def reduce(a: MqElement, prime: PrimeIdeal) -> ResidueFieldElement:
    if a.q != prime.q:
        raise ValueError(f"element of M_{a.q} reduced at a prime of M_{prime.q}")
    return _reduce_coords(a.q, a.coords, prime.s_i, prime.s_q)


def _kernel_lattice(q: int, p: int, s_i: ResidueFieldElement, s_q: ResidueFieldElement) -> IdealLattice:
    images = [_reduce_coords(q, e, s_i, s_q) for e in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))]
    gens = [tuple(p if j == r else 0 for j in range(4)) for r in range(4)]
    pivots = [j for j in range(1, 4) if images[j].b]
    if not pivots:
        for j in range(1, 4):
            gens.append(tuple(-images[j].a if r == 0 else (1 if r == j else 0) for r in range(4)))
    else:
        pivot = pivots[0]
        inv = pow(images[pivot].b, -1, p)
        for j in range(1, 4):
            if j == pivot:
                continue
            y = images[j].b * inv % p
            x = (images[j].a - y * images[pivot].a) % p
            vec = [0, 0, 0, 0]
            vec[0] -= x
            vec[pivot] -= y
            vec[j] += 1
            gens.append(tuple(vec))
    return IdealLattice.from_generators(gens)


def _check_unramified(q: int, p: int):
    if p <= 0 or not isprime(p):
        raise ValueError(f"{p} is not a rational prime")
    if p == 2 or p == q:
        raise RamifiedPrimeError(f"p={p} ramifies in M_{q}")


@lru_cache(maxsize=4096)
def primes_above(ctx: QContext, p: int) -> Tuple[PrimeIdeal, ...]:
    q = ctx.q
    _check_unramified(q, p)
    d = smallest_nonresidue(p)
    s_i = residue_sqrt(-1, p, d)
    s_q = residue_sqrt(q, p, d)
    if s_i.is_prime_field() and s_q.is_prime_field():
        f = 1
        pairs = [(s_i, s_q), (s_i, -s_q), (-s_i, s_q), (-s_i, -s_q)]
    elif s_q.is_prime_field():
        f = 2
        pairs = [(s_i, s_q), (s_i, -s_q)]
    else:
        f = 2
        pairs = [(s_i, s_q), (-s_i, s_q)]
    primes = tuple(
        PrimeIdeal(q, p, f, a, b, _kernel_lattice(q, p, a, b))
        for a, b in pairs
    )
    for prime in primes:
        if prime.lattice.det != p ** f:
            raise ArithmeticError(f"{prime} has index {prime.lattice.det}, expected {p ** f}")
    logger.debug(f"p={p} has {len(primes)} primes of degree {f} in M_{q}")
    return primes


def conjugate_prime(prime: PrimeIdeal, g: GaloisElement) -> PrimeIdeal:
    """The prime g(P); its reduction map sends x to reduce(g(x), P)"""
    i_image = galois_apply(g, MqElement.from_gaussian(prime.q, 0, 1))
    root_image = galois_apply(g, MqElement.from_quadratic(prime.q, 0, 1))
    s_i = reduce(i_image, prime)
    s_q = reduce(root_image, prime)
    gens = [galois_apply(g, MqElement(prime.q, col)).coords for col in prime.lattice.columns()]
    return PrimeIdeal(prime.q, prime.p, prime.f, s_i, s_q, IdealLattice.from_generators(gens))


def ideal_from_element(a: MqElement) -> IdealLattice:
    if a.is_zero():
        raise ValueError("the zero ideal has no lattice of full rank")
    return IdealLattice.from_generators((a * b).coords for b in basis(a.q))


def ideal_product(q: int, x: IdealLattice, y: IdealLattice) -> IdealLattice:
    left = [MqElement(q, c) for c in x.columns()]
    right = [MqElement(q, c) for c in y.columns()]
    return IdealLattice.from_generators((a * b).coords for a in left for b in right)


def ideal_sum_coprime(x: IdealLattice, y: IdealLattice) -> bool:
    return IdealLattice.from_generators(x.columns() + y.columns()).det == 1


@lru_cache(maxsize=4096)
def _lattice_power(q: int, lattice: IdealLattice, k: int) -> IdealLattice:
    if k == 1:
        return lattice
    return ideal_product(q, _lattice_power(q, lattice, k - 1), lattice)


def ideal_power(prime: PrimeIdeal, k: int) -> IdealLattice:
    if k < 1:
        raise ValueError(f"exponent must be positive, got {k}")
    return _lattice_power(prime.q, prime.lattice, k)


def _rational_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(a: MqElement, prime: PrimeIdeal) -> int:
    if a.is_zero():
        raise ValueError("valuation of zero is undefined")
    bound = _rational_valuation(abs(norm_to_q(a)), prime.p) // prime.f
    k = 0
    while k < bound and ideal_power(prime, k + 1).contains(a.coords):
        k += 1
    return k


def factor_principal(a: MqElement) -> List[Tuple[PrimeIdeal, int]]:
    ctx = get_context(a.q)
    n = abs(norm_to_q(a))
    if n == 0:
        raise ValueError("cannot factor zero")
    if n % 2 == 0 or n % a.q == 0:
        raise RamifiedPrimeError(f"{a} is not coprime to {ctx.n_q}")
    factors = []
    for p, exponent in sorted(factorint(n).items()):
        found = 0
        for prime in primes_above(ctx, p):
            e = valuation(a, prime)
            if e:
                factors.append((prime, e))
                found += prime.f * e
        if found != exponent:
            raise ArithmeticError(f"factorization of {a} above p={p} accounts for p^{found}, norm has p^{exponent}")
    return factors


def _search_generator(prime: PrimeIdeal, ctx: QContext, bound_scale: float, delta: float) -> MqElement:
    z1, z2 = embeddings(ctx.eps)
    bound = bound_scale * math.sqrt(prime.p)
    for t in weight_grid(abs(z1) / abs(z2)):
        metric = weighted_metric(ctx.q, t)
        reduced = lll_reduce(prime.lattice.columns(), metric, delta)
        for _, vec in short_vectors(reduced, metric, bound):
            candidate = MqElement(ctx.q, vec)
            if norm_to_q(candidate) == prime.p and prime.contains(candidate):
                return candidate
    raise GeneratorNotFound(f"no element of norm {prime.p} found in {prime} below {bound:.1f}")


def find_generator(prime: PrimeIdeal, bound_scale: float = 4.5, max_attempts: int = 4, delta: float = 0.99) -> MqElement:
    """A generator of a degree-1 prime: any element of P with norm p generates it"""
    if prime.f != 1:
        raise ValueError(f"generator search needs a degree-1 prime, got f={prime.f}")
    ctx = get_context(prime.q)
    for attempt in Retrying(
        stop=stop_after_attempt(max_attempts),
        retry=retry_if_exception_type(GeneratorNotFound),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    ):
        with attempt:
            scale = bound_scale * 2 ** (attempt.retry_state.attempt_number - 1)
            return _search_generator(prime, ctx, scale, delta)
