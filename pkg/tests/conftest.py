import random
from typing import List

import pytest
from sympy import isprime

from backend.arithmetic.ring_mq import SUPPORTED_Q, MqElement, get_context, norm_to_q
from backend.arithmetic.symbols import split_completely


def split_primes(q: int, count: int, start: int = 5) -> List[int]:
    """Primes p = 1 mod 4 with q a square mod p, i.e. split completely in M_q"""
    primes = []
    p = start
    while len(primes) < count:
        if isprime(p) and split_completely(q, p):
            primes.append(p)
        p += 1
    return primes


def random_odd_element(rng: random.Random, q: int, radius: int = 6) -> MqElement:
    """Random nonzero element whose norm is coprime to 2q"""
    while True:
        a = MqElement(q, tuple(rng.randint(-radius, radius) for _ in range(4)))
        if a.is_zero():
            continue
        n = norm_to_q(a)
        if n % 2 and n % q:
            return a


@pytest.fixture
def rng():
    return random.Random(20240613)


@pytest.fixture(params=SUPPORTED_Q)
def q(request):
    return request.param


@pytest.fixture
def ctx(q):
    return get_context(q)


@pytest.fixture
def ctx3():
    return get_context(3)
