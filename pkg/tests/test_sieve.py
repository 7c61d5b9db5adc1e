from sympy import primerange

from backend.services.sieve import iter_odd_primes, primes_one_mod_four, simple_sieve


def test_small_ranges():
    assert primes_one_mod_four(30) == [5, 13, 17, 29]
    assert primes_one_mod_four(2) == []
    assert primes_one_mod_four(5) == [5]
    assert list(iter_odd_primes(3)) == [3]


def test_count_below_ten_thousand():
    assert len(primes_one_mod_four(10_000)) == 609


def test_segments_agree_with_reference():
    expected = list(primerange(3, 5001))
    assert list(iter_odd_primes(5000, segment_odd_count=7)) == expected
    assert list(iter_odd_primes(5000, segment_odd_count=1000)) == expected


def test_simple_sieve():
    assert simple_sieve(1).tolist() == []
    assert simple_sieve(20).tolist() == [2, 3, 5, 7, 11, 13, 17, 19]
