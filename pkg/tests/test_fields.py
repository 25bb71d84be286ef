import random

import pytest
from hypothesis import given, settings, strategies as st

from bianchi.fields import (
    IQInt, Ideal, SUPPORTED_D, canonical_associate, egcd, euclid_divmod,
    euler_phi, format_iq, gcd, iq, omega, parse_iq, primes_above, units,
    divide_exact, sigma0,
)

coord = st.integers(min_value=-10**6, max_value=10**6)
small_d = st.sampled_from(SUPPORTED_D)


@given(small_d, coord, coord, coord, coord)
def test_norm_multiplicative(d, a1, b1, a2, b2):
    x, y = iq(d, a1, b1), iq(d, a2, b2)
    assert (x * y).norm() == x.norm() * y.norm()


@given(small_d, coord, coord)
def test_norm_via_conjugate(d, a, b):
    x = iq(d, a, b)
    n = x * x.conj()
    assert (n.a, n.b) == (x.norm(), 0)
    assert x.norm() >= 0


@given(small_d, coord, coord, coord, coord)
def test_euclid_divmod(d, a1, b1, a2, b2):
    x, y = iq(d, a1, b1), iq(d, a2, b2)
    if y.is_zero():
        with pytest.raises(ZeroDivisionError):
            euclid_divmod(x, y)
        return
    q, r = euclid_divmod(x, y)
    assert x == q * y + r
    assert r.norm() < y.norm()


def test_euclid_examples():
    # d = -2, theta = omega
    q, r = euclid_divmod(iq(-2, 7, 1), iq(-2, 1, 1))
    assert r.norm() < 3
    q, r = euclid_divmod(iq(-2, 6, 0), iq(-2, 3, 0))
    assert (q, r) == (iq(-2, 2, 0), iq(-2, 0, 0))
    q, r = euclid_divmod(iq(-2, 3, 0), iq(-2, 1, 1))
    assert (q, r) == (iq(-2, 1, -1), iq(-2, 0, 0))


@given(small_d, coord, coord, coord, coord)
@settings(max_examples=200)
def test_egcd_bezout(d, a1, b1, a2, b2):
    x, y = iq(d, a1, b1), iq(d, a2, b2)
    s, t, g = egcd(x, y)
    assert s * x + t * y == g
    assert g == gcd(x, y)
    if not g.is_zero():
        assert divide_exact(x, g) is not None
        assert divide_exact(y, g) is not None


def test_units():
    assert len(units(-1)) == 4
    assert len(units(-3)) == 6
    assert len(units(-2)) == len(units(-7)) == len(units(-11)) == 2
    for d in SUPPORTED_D:
        for u in units(d):
            assert u.norm() == 1
    # omega for d = -3 is a primitive 6th root of unity
    w = omega(-3)
    assert (w ** 6).is_one() and not (w ** 3).is_one() and not (w ** 2).is_one()


@given(small_d, coord, coord)
def test_canonical_associate_idempotent(d, a, b):
    x = iq(d, a, b)
    c = canonical_associate(x)
    assert canonical_associate(c) == c
    for u in units(d):
        assert canonical_associate(x * u) == c


def test_factorization_examples():
    # (3) = (1+theta)(1-theta) in Z[sqrt(-2)]
    f = Ideal(iq(-2, 3)).factor()
    assert [(p.norm(), e) for p, e in f] == [(3, 1), (3, 1)]
    assert {p.gen for p, _ in f} == {
        canonical_associate(iq(-2, 1, 1)), canonical_associate(iq(-2, 1, -1))}
    # (5) is inert in Z[sqrt(-2)]
    f = Ideal(iq(-2, 5)).factor()
    assert [(p.norm(), e) for p, e in f] == [(25, 1)]
    # 6 - theta = theta * (1 - 3*theta) up to a unit
    f = Ideal(iq(-2, 6, -1)).factor()
    assert sorted(p.norm() ** e for p, e in f) == [2, 19]
    # theta^2 = -2 ramifies
    f = Ideal(iq(-2, 2)).factor()
    assert [(p.norm(), e) for p, e in f] == [(2, 2)]


def test_primes_above():
    assert len(primes_above(-2, 3)) == 2   # split
    assert len(primes_above(-2, 5)) == 1   # inert
    assert len(primes_above(-2, 2)) == 1   # ramified
    assert primes_above(-2, 2)[0].norm() == 2
    assert len(primes_above(-1, 5)) == 2
    assert len(primes_above(-3, 7)) == 2
    assert len(primes_above(-11, 3)) == 2


@given(small_d, st.integers(min_value=1, max_value=400))
@settings(max_examples=80)
def test_rational_ideal_norm(d, n):
    assert Ideal(iq(d, n)).norm() == n * n


def test_divisors_and_phi():
    n = Ideal(iq(-2, 3, 3))  # 3+3theta = (1+theta)^2 (1-theta)
    divs = n.divisors()
    assert len(divs) == sigma0(n) == 6
    assert all(dv.divides(n) for dv in divs)
    assert divs[0].is_one() and divs[-1] == n
    # phi multiplicativity on coprime parts
    a, b = Ideal(iq(-2, 1, 1)), Ideal(iq(-2, 5))
    assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)
    assert euler_phi(Ideal(iq(-2, 1, 1))) == 2
    assert euler_phi(Ideal(iq(-2, 3))) == 4


def test_parse_format_roundtrip():
    rng = random.Random(0)
    for _ in range(200):
        x = iq(-2, rng.randint(-50, 50), rng.randint(-50, 50))
        assert parse_iq(format_iq(x), -2) == x
    assert parse_iq("3-2*w", -2) == iq(-2, 3, -2)
    assert parse_iq("w", -2) == iq(-2, 0, 1)
    assert parse_iq("-w", -2) == iq(-2, 0, -1)
    assert parse_iq("7", -2) == iq(-2, 7, 0)
    assert parse_iq("1+3*w", -2) == iq(-2, 1, 3)
