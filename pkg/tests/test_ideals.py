import pytest
from sympy import factorint

from backend.arithmetic.ideals import (
    IdealLattice,
    conjugate_prime,
    factor_principal,
    find_generator,
    ideal_from_element,
    ideal_power,
    ideal_product,
    ideal_sum_coprime,
    primes_above,
    reduce,
    valuation,
)
from backend.arithmetic.ring_mq import GaloisElement, MqElement, galois_apply, get_context, norm_to_q
from backend.errors import RamifiedPrimeError
from tests.conftest import random_odd_element, split_primes


def test_split_prime_example(ctx3):
    primes = primes_above(ctx3, 13)
    assert len(primes) == 4
    assert all(P.f == 1 and P.norm == 13 for P in primes)
    assert {(P.s_i.a, P.s_q.a) for P in primes} == {(5, 4), (5, 9), (8, 4), (8, 9)}

    first = primes[0]
    assert (first.s_i.a, first.s_q.a) == (5, 4)
    assert reduce(MqElement.from_gaussian(3, 0, 1), first).a == 5
    assert reduce(MqElement.from_imag(3, 0, 1), first).a == 4
    assert reduce(MqElement.from_int(3, 13), first).is_zero()


@pytest.mark.parametrize("p", [5, 11, 17])
def test_inert_residue_degree_two(ctx3, p):
    primes = primes_above(ctx3, p)
    assert len(primes) == 2
    assert all(P.f == 2 and P.lattice.det == p * p for P in primes)
    assert primes[0].lattice != primes[1].lattice


def test_ramified_and_composite_rejected(ctx3):
    with pytest.raises(RamifiedPrimeError):
        primes_above(ctx3, 3)
    with pytest.raises(RamifiedPrimeError):
        primes_above(ctx3, 2)
    with pytest.raises(ValueError):
        primes_above(ctx3, 9)


def test_split_primes_multiply_to_p(ctx):
    p = split_primes(ctx.q, 1)[0]
    primes = primes_above(ctx, p)
    lattices = {P.lattice for P in primes}
    assert len(lattices) == 4
    assert all(P.lattice.det == p for P in primes)

    product = primes[0].lattice
    for P in primes[1:]:
        product = ideal_product(ctx.q, product, P.lattice)
    assert product == ideal_from_element(MqElement.from_int(ctx.q, p))


@pytest.mark.parametrize("p", [13, 37, 11, 5])
def test_reduction_is_a_homomorphism_with_kernel_p(ctx3, rng, p):
    for P in primes_above(ctx3, p):
        for _ in range(60):
            a = MqElement(3, tuple(rng.randint(-40, 40) for _ in range(4)))
            b = MqElement(3, tuple(rng.randint(-40, 40) for _ in range(4)))
            assert reduce(a * b, P) == reduce(a, P) * reduce(b, P)
            assert reduce(a + b, P) == reduce(a, P) + reduce(b, P)
            assert reduce(a, P).is_zero() == P.contains(a)


def test_conjugate_prime(ctx3, rng):
    primes = primes_above(ctx3, 13)
    lattices = {P.lattice for P in primes}
    P = primes[0]
    images = set()
    for g in GaloisElement:
        image = conjugate_prime(P, g)
        assert image.lattice in lattices
        images.add(image.lattice)
        for _ in range(20):
            a = MqElement(3, tuple(rng.randint(-20, 20) for _ in range(4)))
            assert reduce(a, image) == reduce(galois_apply(g, a), P)
    assert images == lattices


def test_ideal_sum_coprime(ctx3):
    P13 = primes_above(ctx3, 13)[0]
    P61 = primes_above(ctx3, 61)[0]
    w = find_generator(P13)
    assert not ideal_sum_coprime(ideal_from_element(w), ideal_from_element(w))
    assert ideal_sum_coprime(ideal_from_element(w), ideal_from_element(MqElement.from_int(3, 1)))
    assert ideal_sum_coprime(P13.lattice, P61.lattice)


def test_valuation(ctx3):
    P = primes_above(ctx3, 13)[0]
    w = find_generator(P)
    assert valuation(MqElement.from_int(3, 1), P) == 0
    assert valuation(MqElement.from_int(3, 13), P) == 1
    assert valuation(w, P) == 1
    assert valuation(w * w * w, P) == 3
    assert ideal_power(P, 2).det == 169
    with pytest.raises(ValueError):
        ideal_power(P, 0)
    with pytest.raises(ValueError):
        valuation(MqElement.from_int(3, 0), P)


@pytest.mark.parametrize("q", [3, 7, 19])
def test_valuations_account_for_the_norm(q, rng):
    ctx = get_context(q)
    for _ in range(30):
        a = random_odd_element(rng, q, radius=5)
        n = norm_to_q(a)
        for p, exponent in factorint(n).items():
            total = sum(P.f * valuation(a, P) for P in primes_above(ctx, p))
            assert total == exponent


def test_factor_principal(ctx3):
    P = primes_above(ctx3, 13)[0]
    w = find_generator(P)
    assert factor_principal(MqElement.from_int(3, 1)) == []
    assert factor_principal(w) == [(P, 1)]

    factors = factor_principal(w * galois_apply(GaloisElement.SIGMATAU, w))
    assert len(factors) == 2
    assert factors[0][0].lattice != factors[1][0].lattice
    assert all(e == 1 for _, e in factors)

    with pytest.raises(RamifiedPrimeError):
        factor_principal(MqElement.from_int(3, 2))
    with pytest.raises(RamifiedPrimeError):
        factor_principal(MqElement.from_quadratic(3, 0, 1))


def test_generator_examples(ctx3):
    for p in (13, 157):
        primes = primes_above(ctx3, p)
        for P in primes:
            w = find_generator(P)
            assert norm_to_q(w) == p
            assert reduce(w, P).is_zero()
            assert ideal_from_element(w) == P.lattice
            assert all(not reduce(w, other).is_zero() for other in primes if other.lattice != P.lattice)


def test_generators_for_every_q(ctx):
    for p in split_primes(ctx.q, 3):
        for P in primes_above(ctx, p):
            w = find_generator(P)
            assert norm_to_q(w) == p
            assert ideal_from_element(ctx.eps * w) == P.lattice


def test_generator_needs_degree_one(ctx3):
    with pytest.raises(ValueError):
        find_generator(primes_above(ctx3, 5)[0])


def test_hnf_is_canonical():
    a = IdealLattice.from_generators([(13, 0, 0, 0), (0, 13, 0, 0), (0, 0, 13, 0), (0, 0, 0, 13)])
    b = IdealLattice.from_generators([(13, 13, 0, 0), (0, 13, 0, 0), (0, 0, 13, 13), (0, 0, 0, 13), (26, 0, 0, 0)])
    assert a == b
    assert a.det == 13 ** 4
    assert a.contains((26, -13, 0, 39))
    assert not a.contains((1, 0, 0, 0))
