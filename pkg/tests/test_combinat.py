from fractions import Fraction
from math import comb, factorial

import pytest

from qharmonic.combinat import (
    B4_SECOND_KIND_NOTE,
    bernoulli,
    bernoulli2,
    k_poly,
    k_value,
    stirling1,
)
from qharmonic.exact import QQ, UniPoly

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31]


def cauchy_number(n):
    """b_n = integral_0^1 x(x-1)...(x-n+1) dx, expanded with plain fractions."""
    poly = [Fraction(1)]
    for i in range(n):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for k, c in enumerate(poly):
            nxt[k + 1] += c
            nxt[k] -= i * c
        poly = nxt
    return sum(c / (k + 1) for k, c in enumerate(poly))


class TestBernoulli:
    def test_first_values(self):
        assert bernoulli(0) == 1
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(4) == Fraction(-1, 30)

    def test_odd_vanish(self):
        assert all(bernoulli(n) == 0 for n in range(3, 40, 2))

    def test_recurrence(self):
        for n in range(1, 31):
            assert sum(comb(n + 1, k) * bernoulli(k) for k in range(n + 1)) == 0

    def test_large_index_extends_table(self):
        assert bernoulli(60) == Fraction(
            -1215233140483755572040304994079820246041491, 56786730
        )


class TestBernoulliSecondKind:
    def test_printed_values(self):
        assert [bernoulli2(n) for n in range(4)] == [
            1, Fraction(1, 2), Fraction(-1, 6), Fraction(1, 4)
        ]

    def test_b4_from_generating_function(self):
        assert bernoulli2(4) == Fraction(-19, 30)
        assert "-19/30" in B4_SECOND_KIND_NOTE

    def test_against_cauchy_integral(self):
        for n in range(25):
            assert bernoulli2(n) == cauchy_number(n)


class TestStirling:
    def test_small(self):
        assert stirling1(2, 1) == -1
        assert stirling1(3, 2) == -3
        assert [stirling1(3, j) for j in range(4)] == [0, 2, -3, 1]

    def test_diagonal(self):
        assert all(stirling1(n, n) == 1 for n in range(21))

    def test_beyond_n(self):
        assert stirling1(3, 5) == 0

    def test_product_values(self):
        for n in range(16):
            f = UniPoly([stirling1(n, j) for j in range(n + 1)], QQ)
            assert all(f(x) == 0 for x in range(n))
            assert f(n) == factorial(n)


class TestK:
    def test_k2_k3(self):
        assert k_poly(2).as_poly == UniPoly([Fraction(1, 12), 0, Fraction(-1, 12)], QQ, "p")
        assert k_poly(3).as_poly == UniPoly([Fraction(1, 24), 0, Fraction(-1, 24)], QQ, "p")
        assert k_value(2, 7) == -4

    def test_constant_term(self):
        for n in range(2, 12):
            assert k_poly(n).as_poly[0] == (-1) ** (n - 1) * bernoulli2(n) / factorial(n)

    def test_value_matches_polynomial(self):
        for n in range(2, 11):
            for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]:
                assert k_value(n, p) == k_poly(n)(p)

    def test_shape(self):
        for n in range(2, 14):
            f = k_poly(n).as_poly
            assert f.degree <= 2 * (n // 2)
            assert all(f[i] == 0 for i in range(1, f.degree + 1, 2))

    @pytest.mark.parametrize("p", SMALL_PRIMES)
    def test_consistency_triangle(self, p):
        assert Fraction(p - 1, 2) + k_value(2, p) == Fraction(-(p - 1) * (p - 5), 12)
        assert Fraction(p - 1, 2) + k_value(2, p) + k_value(3, p) == Fraction(
            -(p - 1) * (p - 3), 8
        )

    def test_rejects_small_order(self):
        with pytest.raises(ValueError):
            k_value(1, 5)
