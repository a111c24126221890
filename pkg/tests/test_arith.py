import math
import random

import pytest
from hypothesis import given, strategies as st

from hhskit.arith import (
    ArithmeticDomainError, Factorization, ModInt, crt_combine, cyclotomic_value, divisors,
    euler_phi, factorize, is_probable_prime, mod_pow, multiplicative_order, parse_int,
    sqrt_mod, to_hex, from_hex,
)


def naive_pow(b, e, n):
    acc = 1 % n
    for _ in range(e):
        acc = acc * b % n
    return acc


def test_mod_pow_riesel_square():
    assert mod_pow(ModInt(59045, 3 ** 10), 2) == ModInt(16, 3 ** 10)
    assert 16 == 1 + 2 * 3 + 3 ** 2


def test_mod_pow_zero_exponent():
    assert mod_pow(ModInt(12345, 1000003), 0).value == 1


def test_mod_pow_against_repeated_multiplication():
    assert naive_pow(2, 37, 101) == 55
    assert mod_pow(ModInt(2, 101), 37).value == 55


@given(st.integers(0, 10 ** 6), st.integers(0, 2000), st.integers(2, 10 ** 6))
def test_mod_pow_matches_builtin(b, e, n):
    assert mod_pow(ModInt(b, n), e).value == pow(b, e, n)


def test_mod_pow_multiplication_bound():
    for e in (1, 2, 3, 1000, 2 ** 20 - 1, 123456789):
        counter = [0]
        mod_pow(ModInt(3, 10 ** 9 + 7), e, counter)
        assert counter[0] <= 2 * math.log2(e) + 1e-9 or e == 1


def test_euler_theorem_small_moduli():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randrange(2, 500)
        a = rng.randrange(1, n)
        if math.gcd(a, n) == 1:
            assert mod_pow(ModInt(a, n), euler_phi(n)).value == 1
            assert euler_phi(n) % multiplicative_order(a, n) == 0


def test_modint_rejects_mismatched_moduli():
    with pytest.raises(ArithmeticDomainError):
        ModInt(1, 5) + ModInt(1, 7)


def test_modint_reduced_and_inverse():
    x = ModInt(-3, 7)
    assert x.value == 4
    assert (x * x.inverse()).value == 1
    with pytest.raises(ZeroDivisionError):
        ModInt(0, 7).inverse()


def test_crt_examples():
    assert crt_combine([(1, 2), (2, 3)]) == ModInt(5, 6)
    assert [x for x in range(6) if x % 2 == 1 and x % 3 == 2] == [5]
    assert crt_combine([(4, 9)]) == ModInt(4, 9)
    assert crt_combine([(0, 4), (0, 9)]) == ModInt(0, 36)
    with pytest.raises(ArithmeticDomainError):
        crt_combine([(1, 4), (1, 6)])


def test_cyclotomic_examples():
    for q in (2, 3, 10):
        assert cyclotomic_value(1, q) == q - 1
    assert cyclotomic_value(2, 7) == 8
    assert cyclotomic_value(6, 4) == 4 * 4 - 4 + 1 == 13


@pytest.mark.parametrize("q", [2, 3, 5])
def test_cyclotomic_product_identity(q):
    for n in range(1, 13):
        prod = 1
        for d in divisors(n):
            prod *= cyclotomic_value(d, q)
        assert prod == q ** n - 1


def test_factorization_invariants():
    for n in (2, 360, 2 ** 4 * 3 ** 4 * 5 ** 4, 600851475143, 10 ** 12 + 39):
        f = factorize(n)
        assert f.value == n
        primes = f.primes
        assert primes == sorted(set(primes))
        assert all(is_probable_prime(q) for q in primes)
    with pytest.raises(Exception):
        Factorization(((3, 1), (2, 1)))


def test_sqrt_mod():
    for p in (7, 13, 101, 10007):
        for a in range(1, 60):
            r = sqrt_mod(a, p)
            if r is None:
                assert pow(a, (p - 1) // 2, p) == p - 1
            else:
                assert r * r % p == a % p


def test_int_parsing_and_hex():
    assert parse_int("0x1f") == 31
    assert parse_int("42") == 42
    assert from_hex(to_hex(-255)) == -255
