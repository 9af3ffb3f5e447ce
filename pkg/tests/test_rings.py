from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharmonic.exact import QQ, ZZ, NonUnitError, RingMismatchError, UniPoly
from qharmonic.rings import (
    Modulus,
    QuotientRing,
    cyclotomic,
    is_prime,
    one_minus_q,
    q_int,
    q_int_poly,
    q_power,
    reduce,
    residue_inv,
)

PRIMES = [2, 3, 5, 7, 11, 13]


def totient(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def test_is_prime():
    assert [n for n in range(40) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def test_modulus_shape():
    for p in PRIMES:
        for e in (1, 2):
            m = Modulus(p, e)
            assert m.modulus_poly.is_monic()
            assert m.modulus_poly.degree == e * (p - 1)
    assert Modulus(5).modulus_poly == q_int_poly(5)


def test_modulus_rejects_composites():
    with pytest.raises(ValueError):
        Modulus(9)


class TestReduce:
    def test_modulus_is_zero(self):
        assert reduce(q_int_poly(5), Modulus(5)) == 0

    def test_q_to_the_p(self):
        assert reduce(UniPoly.monomial(5, 1, QQ, "q"), Modulus(5)) == 1

    def test_unchanged_below_degree(self):
        r = reduce(q_int_poly(5), Modulus(5, 2))
        assert r.rep == q_int_poly(5)

    def test_integer_input(self):
        assert reduce(UniPoly([0, 0, 0, 0, 0, 1], ZZ, "q"), Modulus(5)) == 1


class TestInverse:
    def test_one(self):
        m = Modulus(5)
        assert residue_inv(m.one) == 1

    def test_zero_divisor(self):
        with pytest.raises(NonUnitError) as err:
            residue_inv(reduce(q_int_poly(5), Modulus(5)))
        assert err.value.gcd is not None

    def test_zero_divisor_mod_square(self):
        m = Modulus(5, 2)
        with pytest.raises(NonUnitError) as err:
            residue_inv(reduce(q_int_poly(5), m))
        assert err.value.gcd.monic() == q_int_poly(5)

    def test_q2_mod_square(self):
        m = Modulus(5, 2)
        a = q_int(2, m)
        assert residue_inv(a) * a == 1

    @pytest.mark.parametrize("p", PRIMES)
    @pytest.mark.parametrize("e", [1, 2])
    def test_every_q_integer_below_p_is_a_unit(self, p, e):
        m = Modulus(p, e)
        for k in range(1, p):
            a = q_int(k, m)
            assert a * a.inverse() == 1

    @pytest.mark.parametrize("p", PRIMES)
    @pytest.mark.parametrize("e", [1, 2])
    def test_one_minus_q_is_a_unit(self, p, e):
        x = one_minus_q(Modulus(p, e))
        assert x * x.inverse() == 1


class TestQInt:
    def test_one(self):
        assert q_int(1, Modulus(7)) == 1

    @pytest.mark.parametrize("p", PRIMES)
    def test_p_and_p_plus_one(self, p):
        m = Modulus(p)
        assert q_int(p, m) == 0
        assert q_int(p + 1, m) == 1

    def test_powers(self):
        m = Modulus(7)
        for k in range(60):
            assert q_power(k, m) == reduce(UniPoly.monomial(k, 1, QQ, "q"), m)
        assert q_power(123, Modulus(7, 2)) == reduce(UniPoly.monomial(123, 1, QQ, "q"), Modulus(7, 2))


class TestCyclotomic:
    def test_small(self):
        assert cyclotomic(1) == UniPoly([-1, 1], ZZ)
        assert cyclotomic(3) == UniPoly([1, 1, 1], ZZ)
        assert cyclotomic(12) == UniPoly([1, 0, -1, 0, 1], ZZ)

    def test_prime_cyclotomic_is_q_integer(self):
        for p in PRIMES:
            assert cyclotomic(p).coeffs == tuple([1] * p)

    @pytest.mark.parametrize("s", range(1, 25))
    def test_divides_and_degree(self, s):
        phi = cyclotomic(s)
        assert phi.degree == totient(s)
        _, rem = divmod(UniPoly.monomial(s, 1, ZZ, "t") - 1, phi)
        assert rem.is_zero()

    def test_root_of_unity_class(self):
        ring = QuotientRing(cyclotomic(3), "t")
        eta = ring.gen()
        assert eta ** 2 + eta + 1 == 0
        assert eta ** 3 == 1


def test_mixed_moduli_raise():
    with pytest.raises(RingMismatchError):
        Modulus(5).one + Modulus(5, 2).one
    with pytest.raises(RingMismatchError):
        Modulus(5).one * Modulus(7).one


coeffs = st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=6), max_size=14)


@settings(max_examples=100)
@given(coeffs, coeffs, st.sampled_from([(5, 1), (5, 2), (7, 1), (7, 2)]))
def test_reduce_is_a_homomorphism(a, b, pe):
    m = Modulus(*pe)
    f, g = UniPoly(a, QQ, "q"), UniPoly(b, QQ, "q")
    assert reduce(f + g, m) == reduce(f, m) + reduce(g, m)
    assert reduce(f * g, m) == reduce(f, m) * reduce(g, m)


@given(coeffs)
def test_residue_representation_is_canonical(a):
    m = Modulus(5, 2)
    r = reduce(UniPoly(a, QQ, "q"), m)
    assert r.rep.degree < m.degree
    assert reduce(r.rep, m) == r
    assert r.den > 0
    if r.num:
        assert gcd(r.den, *r.num) == 1


def test_scalar_operations():
    m = Modulus(7)
    x = one_minus_q(m)
    assert (x * 3) / 3 == x
    assert x / Fraction(1, 2) == x + x
    assert 1 - x == reduce(UniPoly([0, 1], QQ, "q"), m)
    assert (x ** -2) * x * x == 1
