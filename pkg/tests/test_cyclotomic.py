from __future__ import annotations

import json
import math
import random
from fractions import Fraction

import pytest

from invariant_quartics.cyclotomic import (
    ComplexInterval,
    CyclotomicField,
    PrimeEmbedding,
    cyclotomic_polynomial,
    embed_complex,
    euler_phi,
    find_prime_embedding,
    is_prime,
    multiplicative_order,
    prime_embeddings,
    root_of_unity,
    scalar_from_json,
    scalar_to_expr,
    scalar_to_json,
    sqrt_int,
)
from invariant_quartics.errors import BadPrime, ConductorMismatch, NotInField

from conftest import random_nonzero_scalar, random_scalar


def test_euler_phi_small():
    values = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    assert [euler_phi(n) for n in range(1, 13)] == values


def test_cyclotomic_polynomial_known():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    # prime: all ones
    assert cyclotomic_polynomial(7) == (1,) * 7


def test_cyclotomic_polynomial_divides_xn_minus_1():
    for n in (6, 15, 24, 28, 40, 60, 120):
        phi = cyclotomic_polynomial(n)
        assert len(phi) == euler_phi(n) + 1
        # evaluate both at a few integers: Phi_n(t) must divide t^n - 1
        for t in (2, 3, 5):
            val = sum(c * t**k for k, c in enumerate(phi))
            assert (t**n - 1) % val == 0


def test_field_is_singleton_and_zeta_order():
    f = CyclotomicField(24)
    assert CyclotomicField(24) is f
    z = f.zeta
    assert z**24 == f.one
    assert all(z**j != f.one for j in range(1, 24))


def test_field_axioms_random():
    rng = random.Random(101)
    for N in (1, 2, 8, 24, 40):
        f = CyclotomicField(N)
        for _ in range(60):
            a = random_scalar(rng, f)
            b = random_scalar(rng, f)
            c = random_scalar(rng, f)
            assert a + b == b + a
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + f.zero == a
            assert a * f.one == a
            assert a - a == f.zero
            if a:
                assert a * a.inverse() == f.one
                assert (a / a) == f.one


def test_pow_and_neg():
    f = CyclotomicField(12)
    z = f.zeta
    assert z**0 == f.one
    assert z**-1 == z.inverse()
    assert (-z) * (-z) == z * z
    assert (z + 1) ** 3 == (z + 1) * (z + 1) * (z + 1)


def test_cross_conductor_arithmetic_rejected():
    a = CyclotomicField(8).zeta
    b = CyclotomicField(12).zeta
    with pytest.raises(ConductorMismatch):
        _ = a + b


def test_root_of_unity_examples():
    # z_24^8 is a primitive cube root; z_24^6 = i
    w = root_of_unity(24, 8)
    assert w**3 == CyclotomicField(24).one
    assert w != CyclotomicField(24).one
    i = root_of_unity(24, 6)
    assert i * i == CyclotomicField(24).rational(-1)
    # negative exponents wrap
    assert root_of_unity(24, -1) == root_of_unity(24, 23)


def test_multiplicative_order():
    f = CyclotomicField(40)
    assert multiplicative_order(f.one, 10) == 1
    assert multiplicative_order(f.zeta_pow(5), 100) == 8
    assert multiplicative_order(f.rational(2), 50) is None


def test_sqrt_int_frozen_oracle():
    # sqrt(5) in Q(zeta_5): power-basis coordinates frozen by hand
    # computation of the quadratic Gauss sum 1 + 2*(z + z^4).
    s = sqrt_int(5, 5)
    assert s.den == 1
    assert s.nums == (-1, 0, -2, -2)
    assert s * s == CyclotomicField(5).rational(5)
    mid = embed_complex(s).mid
    assert abs(mid - 2.2360679) < 1e-6


def test_sqrt_int_membership_rules():
    # odd prime p = 1 mod 4: needs p | N
    assert (sqrt_int(5, 5)) ** 2 == CyclotomicField(5).rational(5)
    with pytest.raises(NotInField):
        sqrt_int(7, 7)  # 7 = 3 mod 4 needs 28 | N
    assert sqrt_int(28, 7) ** 2 == CyclotomicField(28).rational(7)
    with pytest.raises(NotInField):
        sqrt_int(4, 2)  # sqrt(2) needs 8 | N
    assert sqrt_int(8, 2) ** 2 == CyclotomicField(8).rational(2)
    # composite squarefree parts multiply
    assert sqrt_int(120, 15) ** 2 == CyclotomicField(120).rational(15)
    # perfect squares never need an extension
    assert sqrt_int(1, 9) == CyclotomicField(1).rational(3)
    # positive real root picked
    assert embed_complex(sqrt_int(120, 15)).mid.real > 0


def test_sqrt_int_square_factor():
    assert sqrt_int(8, 8) == CyclotomicField(8).rational(2) * sqrt_int(8, 2)


def test_lift_to_larger_conductor():
    rng = random.Random(7)
    small = CyclotomicField(8)
    big = CyclotomicField(24)
    for _ in range(40):
        a = random_scalar(rng, small)
        b = random_scalar(rng, small)
        assert (a * b).lift_to(big) == a.lift_to(big) * b.lift_to(big)
        assert (a + b).lift_to(big) == a.lift_to(big) + b.lift_to(big)
    assert small.zeta.lift_to(big) == big.zeta_pow(3)


def test_embed_complex_certified():
    f = CyclotomicField(8)
    iv = embed_complex(f.zeta)
    expected = complex(math.sqrt(0.5), math.sqrt(0.5))
    assert abs(iv.mid - expected) < 1e-12
    assert not iv.contains_zero()
    assert embed_complex(f.zero).contains_zero()
    # higher digit requests tighten the interval
    wide = embed_complex(f.zeta + 1, digits=10)
    tight = embed_complex(f.zeta + 1, digits=30)
    assert tight.width < wide.width
    assert embed_complex(f.rational(-3)).real_sign() == -1


def test_scalar_expr_round_trip():
    from invariant_quartics.expressions import parse_scalar

    rng = random.Random(11)
    for N in (8, 24, 40):
        f = CyclotomicField(N)
        for _ in range(50):
            a = random_scalar(rng, f, height=6)
            assert parse_scalar(scalar_to_expr(a), N) == a


def test_scalar_json_round_trip():
    rng = random.Random(13)
    f = CyclotomicField(24)
    for _ in range(25):
        a = random_scalar(rng, f)
        d = scalar_to_json(a)
        assert d["conductor"] == 24
        assert len(d["approx"]) == 2
        assert scalar_from_json(json.loads(json.dumps(d))) == a
    d = scalar_to_json(f.rational(Fraction(-7, 3)))
    assert d["coeffs"][0] == "-7/3"


def test_is_prime():
    primes = [p for p in range(2, 80) if is_prime(p)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79]
    assert is_prime(2**31 - 1)
    assert not is_prime(561)  # Carmichael


def test_prime_embedding_basics():
    e = find_prime_embedding(8)
    assert e.p % 8 == 1 and e.p > 109
    assert pow(e.zeta_image, 8, e.p) == 1
    assert all(pow(e.zeta_image, j, e.p) != 1 for j in range(1, 8))


def test_prime_embedding_is_ring_homomorphism():
    rng = random.Random(17)
    for N in (8, 24):
        e = find_prime_embedding(N)
        f = CyclotomicField(N)
        for _ in range(60):
            a = random_scalar(rng, f)
            b = random_scalar(rng, f)
            assert e.reduce_scalar(a * b) == (e.reduce_scalar(a) * e.reduce_scalar(b)) % e.p
            assert e.reduce_scalar(a + b) == (e.reduce_scalar(a) + e.reduce_scalar(b)) % e.p


def test_prime_embedding_rejects_bad_denominator():
    e = find_prime_embedding(1)
    f = CyclotomicField(1)
    bad = f.rational(Fraction(1, e.p))
    with pytest.raises(BadPrime):
        e.reduce_scalar(bad)


def test_prime_embeddings_stream_distinct_and_avoid():
    gen = prime_embeddings(8, avoid=(113,))
    seen = [next(gen).p for _ in range(4)]
    assert len(set(seen)) == 4
    assert 113 not in seen
    assert all(p > 109 and p % 8 == 1 for p in seen)


def test_prime_embedding_verifies_root_order():
    with pytest.raises(BadPrime):
        PrimeEmbedding(8, 113, 1)  # 1 does not have order 8
