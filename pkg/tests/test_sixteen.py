from fractions import Fraction

import pytest

from backend.arithmetic.ideals import find_generator, primes_above
from backend.arithmetic.ring_mq import (
    PUBLISHED_UNIT_ROWS,
    SUPPORTED_Q,
    GaloisElement,
    MqElement,
    Subfield,
    galois_apply,
    get_context,
    norm_to_subfield,
)
from backend.arithmetic.symbols import SymbolValue, degree_one_primes, jacobi, quartic_rational
from backend.errors import DegenerateSymbol
from backend.services.classgroup import class_number, two_adic_valuation
from backend.services.sieve import primes_one_mod_four
from backend.services.sixteen import (
    HalfGaussian,
    a_ideal,
    bracket,
    e_p,
    ep_record,
    normalize_u,
    oracle_e,
    orbit_check,
    orbit_step,
    prop31_check,
    q2_factor,
    rank_profile,
    s_indicator,
    solve_norm_equation,
    solve_norm_equation_bruteforce,
    twisted_ratio,
    unit_coeff_check,
    unit_table_row,
)
from tests.conftest import random_odd_element, split_primes


def _criterion_agrees(q, p):
    h = class_number(-q * p)
    k = min(two_adic_valuation(h), 4)
    chi4 = quartic_rational(-q, p) if jacobi(-q, p) == 1 else None
    assert (jacobi(-q, p) == 1) == (k >= 2), (q, p, h)
    assert (chi4 == SymbolValue.ONE) == (k >= 3), (q, p, h)
    assert e_p(q, p) == oracle_e(h), (q, p, h)


def test_solve_examples():
    assert solve_norm_equation(61, 3) == (8, 1)
    assert normalize_u(3, solve_norm_equation(13, 3)) == (5, 2)
    assert normalize_u(3, solve_norm_equation(157, 3)) == (13, 2)
    with pytest.raises(ValueError):
        solve_norm_equation(5, 3)


def test_solve_represents_p(ctx):
    q = ctx.q
    for p in split_primes(q, 60):
        u, v = solve_norm_equation(p, q)
        assert u > 0 and v >= 0
        assert u * u - q * v * v == p
        bu, bv = solve_norm_equation_bruteforce(p, q)
        assert bu * bu - q * bv * bv == p


def test_orbit_step_examples():
    assert orbit_step(3, (8, 1)) == (1, 2)
    assert orbit_step(7, (1, 0)) == (0, 3)


def test_orbit_has_length_four(ctx):
    assert orbit_check(ctx)
    for u in range(4):
        for v in range(4):
            if (u + v) % 2 == 0:
                continue
            x = (u, v)
            for _ in range(4):
                x = orbit_step(ctx.q, x)
            assert x == (u, v)


def test_normalize_examples():
    assert normalize_u(3, (8, 1)) == (13, 6)
    assert normalize_u(3, (5, 2)) == (5, 2)
    assert normalize_u(3, (13, 2)) == (13, 2)


def test_normalize_preserves_norm(ctx):
    q = ctx.q
    for p in split_primes(q, 30):
        u, v = normalize_u(q, solve_norm_equation(p, q))
        assert u % 4 == 1 and v >= 0
        assert u * u - q * v * v == p


@pytest.mark.parametrize("p, e, h", [(13, 0, 4), (61, -1, 8), (157, 1, 16)])
def test_spot_values(p, e, h):
    assert e_p(3, p) == e
    assert class_number(-3 * p) == h
    assert oracle_e(h) == e


def test_rank_profile():
    assert rank_profile(3, 157) == (True, True, True)
    assert rank_profile(3, 61) == (True, True, False)
    assert rank_profile(3, 13) == (True, False, False)
    assert rank_profile(3, 5) == (False, False, False)


def test_record():
    record = ep_record(3, 61, with_oracle=True)
    assert (record.chi, record.chi4, record.u, record.v, record.e) == (1, 1, 13, 6, -1)
    assert (record.h, record.v2h, record.agree) == (8, 3, True)

    inert = ep_record(3, 5)
    assert (inert.chi, inert.chi4, inert.u, inert.e, inert.h) == (-1, None, None, 0, None)


def test_invalid_primes_rejected():
    for p in (7, 9, 2):
        with pytest.raises(ValueError):
            e_p(3, p)


@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_criterion_matches_oracle(q):
    for p in primes_one_mod_four(1500):
        if p != q:
            _criterion_agrees(q, p)


@pytest.mark.slow
@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_criterion_matches_oracle_to_20000(q):
    for p in primes_one_mod_four(20000):
        if p != q:
            _criterion_agrees(q, p)


def test_unit_rows(ctx):
    assert unit_coeff_check(ctx)
    row = unit_table_row(ctx.q)
    assert row.coeff_row == PUBLISHED_UNIT_ROWS[ctx.q]
    assert row.coeff_ok and row.orbit_ok and row.discriminant_ok


def _generators(q, count):
    ctx = get_context(q)
    for p in split_primes(q, count):
        for P in primes_above(ctx, p):
            yield p, find_generator(P)


def _check_unit_invariances(q, count):
    ctx = get_context(q)
    for p, w in _generators(q, count):
        assert sum(s_indicator(ctx.eps ** i * w) for i in range(4)) == 1
        assert bracket(ctx.eps ** 4 * w) == bracket(w)
        assert bracket(ctx.nu * w) == bracket(w)
        value = a_ideal(w)
        assert value == a_ideal(ctx.eps * w) == a_ideal(ctx.nu ** 3 * w)
        assert value.to_int() == e_p(q, p)


@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_unit_invariances(q):
    _check_unit_invariances(q, 3)


@pytest.mark.slow
@pytest.mark.parametrize("q", SUPPORTED_Q)
def test_unit_invariances_50_primes(q):
    _check_unit_invariances(q, 50)


def test_bracket_at_157():
    ctx = get_context(3)
    w = find_generator(degree_one_primes(3, 157)[0])
    x = next(ctx.eps ** i * w for i in range(4) if s_indicator(ctx.eps ** i * w))
    assert bracket(x) == SymbolValue.ONE


def test_s_indicator_reads_u_mod_4():
    ctx = get_context(3)
    w = find_generator(degree_one_primes(3, 157)[0])
    for i in range(4):
        x = ctx.eps ** i * w
        u = norm_to_subfield(x, Subfield.REAL).x
        assert s_indicator(x) == (1 if u % 4 == 1 else 0)


@pytest.mark.parametrize("p, expected", [(13, 0), (61, -1), (157, 1)])
def test_sequence_values(p, expected):
    w = find_generator(degree_one_primes(3, p)[0])
    assert a_ideal(w) == HalfGaussian(Fraction(expected), Fraction(0))
    assert prop31_check(degree_one_primes(3, p)[0])


def test_sequence_vanishes_off_coprime_ideals():
    assert a_ideal(MqElement.from_int(3, 2)) == HalfGaussian.zero()
    assert a_ideal(MqElement.from_quadratic(7, 0, 1)) == HalfGaussian.zero()
    with pytest.raises(ValueError):
        a_ideal(MqElement.from_int(3, 0))


@pytest.mark.parametrize("q", [3, 7, 11])
def test_prop31_for_small_primes(q):
    for p in split_primes(q, 6):
        for P in degree_one_primes(q, p):
            assert prop31_check(P)


@pytest.mark.parametrize("q", [3, 7])
def test_q2_factor(q, rng):
    for _ in range(50):
        w = random_odd_element(rng, q)
        z = random_odd_element(rng, q)
        value = q2_factor(w, z)
        assert value in (-1, 0, 1)

        w2 = w + MqElement(q, tuple(rng.randint(-2, 2) for _ in range(4))) * 8
        z2 = z + MqElement(q, tuple(rng.randint(-2, 2) for _ in range(4))) * 8
        try:
            assert q2_factor(w2, z2) == value
        except ValueError:
            continue


def test_q2_factor_of_a_square():
    w = find_generator(degree_one_primes(3, 157)[0])
    u = norm_to_subfield(w, Subfield.REAL).x
    u_square = norm_to_subfield(w * w, Subfield.REAL).x
    expected = jacobi(2, u) ** 2 * jacobi(2, u_square) if u % 2 else 0
    assert q2_factor(w, w) == expected


def _odd_u_element(rng, q, radius):
    ctx = get_context(q)
    w = random_odd_element(rng, q, radius)
    return next(ctx.eps ** i * w for i in range(4) if norm_to_subfield(ctx.eps ** i * w, Subfield.REAL).x % 2)


def test_twisted_ratio_in_mu4(rng):
    q = 3
    checked = 0
    for _ in range(25):
        w = _odd_u_element(rng, q, 4)
        z = _odd_u_element(rng, q, 4)
        try:
            mu = twisted_ratio(w, z)
        except DegenerateSymbol:
            continue
        assert mu != SymbolValue.ZERO
        checked += 1
    assert checked >= 5


def test_twisted_ratio_constant_on_classes_mod_32(rng):
    q = 3
    checked = 0
    for _ in range(25):
        w = _odd_u_element(rng, q, 3)
        z = _odd_u_element(rng, q, 3)
        w2 = w + MqElement(q, tuple(rng.randint(-1, 1) for _ in range(4))) * 32
        z2 = z + MqElement(q, tuple(rng.randint(-1, 1) for _ in range(4))) * 32
        try:
            first = twisted_ratio(w, z)
            second = twisted_ratio(w2, z2)
        except (DegenerateSymbol, ValueError):
            continue
        assert first == second
        checked += 1
    assert checked >= 3


def test_twisted_ratio_degenerate():
    w = find_generator(degree_one_primes(3, 13)[0])
    z = galois_apply(GaloisElement.SIGMATAU, w)
    with pytest.raises(DegenerateSymbol):
        twisted_ratio(w, z)


def test_half_gaussian():
    i = HalfGaussian.from_symbol(SymbolValue.I)
    assert i * i == HalfGaussian.from_symbol(SymbolValue.MINUS_ONE)
    half = HalfGaussian(Fraction(1), Fraction(0)).scale(Fraction(1, 2))
    assert (half + half).to_int() == 1
    with pytest.raises(ValueError):
        half.to_int()
    with pytest.raises(ValueError):
        i.to_int()
