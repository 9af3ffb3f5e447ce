"""One test per acceptance criterion.

All arithmetic is exact, so every comparison is equality of rationals or of
canonical residues (tolerance zero).  Each test also asserts its wall-clock
budget.  ``conftest.py`` prints one PASS/FAIL line per criterion.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from math import comb

from qharmonic.combinat import bernoulli, k_poly, k_value
from qharmonic.exact import QQ, Series, UniPoly, poly_ext_gcd, series_div
from qharmonic.qmhs import (
    Index,
    closed_form_w2,
    closed_form_w3,
    h_norm,
    h_sum,
    homo_factor,
    homo_product_coeffs,
    homo_recursion,
    homogeneous_expected_degree,
    stuffle_expand,
)
from qharmonic.rings import Modulus, is_prime, one_minus_q, q_int, q_power, reduce
from qharmonic.verify import VerifyConfig, run_check

TOLERANCE = 0  # exact equality throughout


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f}s, budget {self.seconds}s"


def primes_between(lo, hi):
    return [p for p in range(lo, hi + 1) if is_prime(p)]


def test_criterion_1_harmonic_mod_square():
    with Budget(1):
        for p in (5, 7, 11, 13):
            m = Modulus(p, 2)
            x = one_minus_q(m)
            rhs = x * Fraction(p - 1, 2) + x * x * q_int(p, m) * Fraction(p * p - 1, 24)
            assert h_sum(Index((1,)), p - 1, m) - rhs == TOLERANCE
        m = Modulus(5, 2)
        x = one_minus_q(m)
        assert h_sum(Index((1,)), 4, m) == x * 2 + x * x * q_int(5, m)


def test_criterion_2_weight_two_and_three():
    with Budget(5):
        for p in primes_between(5, 31):
            m = Modulus(p)
            assert h_norm(Index((2,)), p - 1, m) == Fraction(-(p - 1) * (p - 5), 12)
            assert h_norm(Index((3,)), p - 1, m) == Fraction(-(p - 1) * (p - 3), 8)
        spots = {5: (0, -1), 7: (-1, -3)}
        for p, (two, three) in spots.items():
            m = Modulus(p)
            assert h_norm(Index((2,)), p - 1, m) == two
            assert h_norm(Index((3,)), p - 1, m) == three


def test_criterion_3_modifier_sums():
    with Budget(30):
        assert k_poly(2).as_poly == UniPoly([Fraction(1, 12), 0, Fraction(-1, 12)], QQ, "p")
        assert k_poly(3).as_poly == UniPoly([Fraction(1, 24), 0, Fraction(-1, 24)], QQ, "p")
        for p in primes_between(5, 19):
            m = Modulus(p)
            assert Fraction(p - 1, 2) + k_value(2, p) == Fraction(-(p - 1) * (p - 5), 12)
            assert Fraction(p - 1, 2) + k_value(2, p) + k_value(3, p) == Fraction(
                -(p - 1) * (p - 3), 8
            )
            for n in range(2, 9):
                for t in range(n):
                    got = h_norm(Index((n,), (t,)), p - 1, m)
                    if t == 0:
                        want = Fraction(p - 1, 2) + sum(k_value(j, p) for j in range(2, n + 1))
                    else:
                        want = sum(
                            comb(t - 1, i) * (-1) ** i * k_value(n - i, p) for i in range(t)
                        )
                    assert got == want, (p, n, t)


def test_criterion_4_homogeneous_three_ways():
    with Budget(60):
        for p in (5, 7, 11, 13):
            m = Modulus(p)
            for s in range(1, 5):
                product = homo_product_coeffs(s, p, 5)
                for ell in range(1, 6):
                    dp = h_norm(Index.homogeneous(s, ell), p - 1, m)
                    assert dp == homo_recursion(s, ell, m) == product[ell], (p, s, ell)
                    if s == 1:
                        assert dp == Fraction(comb(p - 1, ell), ell + 1)
        assert h_norm(Index.homogeneous(1, 3), 6, Modulus(7)) == 5


def test_criterion_5_closed_form_structure():
    mismatches = []
    with Budget(60):
        for s, form, limit in ((2, closed_form_w2, 6), (3, closed_form_w3, 4)):
            for ell in range(1, limit + 1):
                F = homo_factor(s, ell)
                assert F.is_monic(), (s, ell)
                assert F.degree == homogeneous_expected_degree(s, ell), (s, ell, F.degree)
                f = form(ell)
                for p in primes_between(3 * ell + 3, 3 * ell + 30):
                    dp = h_norm(Index.homogeneous(s, ell), p - 1, Modulus(p))
                    if dp != f(p):
                        mismatches.append(f"s={s} l={ell} p={p}: dp={dp} form={f(p)}")
        assert homogeneous_expected_degree(3, 1) == 1 and homogeneous_expected_degree(3, 2) == 4
    assert not mismatches, "\n".join(mismatches)


def test_criterion_6_depth_two_phi2_lehmer():
    with Budget(30):
        for p in primes_between(2, 19):
            for cid in ("depth2", "reversal"):
                rs = run_check(cid, {"prime": p}, VerifyConfig(max_m=3))
                assert len(rs) == 9 and all(r.passed for r in rs), (cid, p)
        for p in (2, 3, 5, 7, 11, 13):
            m = Modulus(p)
            total = m.zero
            for k in range(1, p):
                total = total + q_power(k, m) * k / q_int(k, m) ** 2
            assert total == one_minus_q(m) ** 2 * Fraction(-p * (p - 1) * (p + 1), 24)
        for p in primes_between(3, 19):
            m = Modulus(p)
            for n in range(1, 4):
                got = h_sum(Index((2 * n,), (n,)), (p - 1) // 2, m)
                const = Fraction(1, 2) * sum(
                    comb(n - 1, j) * (-1) ** j * k_value(2 * n - j, p) for j in range(n)
                )
                assert got == one_minus_q(m) ** (2 * n) * const, (p, n)


def _random_index(rng):
    depth = rng.randint(1, 2)
    return Index(
        tuple(rng.randint(1, 3) for _ in range(depth)),
        tuple(rng.randint(0, 2) for _ in range(depth)),
    )


def _random_poly(rng, size=6):
    return UniPoly(
        [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(rng.randint(0, size))],
        QQ,
        "q",
    )


def test_criterion_7_property_suites():
    rng = random.Random(20261016)
    with Budget(30):
        primes = (5, 7, 11)
        for i in range(200):
            a, b = _random_index(rng), _random_index(rng)
            p = primes[i % 3]
            m = Modulus(p)
            for n in (3, p - 1):
                lhs = h_sum(a, n, m) * h_sum(b, n, m)
                rhs = m.zero
                for term in stuffle_expand(a, b):
                    rhs = rhs + h_sum(term.index, n, m) * term.multiplicity
                assert lhs == rhs, (a, b, p, n)
        for _ in range(200):
            f, g, h = (_random_poly(rng) for _ in range(3))
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h
            assert f * g == g * f
            m = Modulus(rng.choice(primes), rng.choice((1, 2)))
            assert reduce(f * g, m) == reduce(f, m) * reduce(g, m)
            if not (f.is_zero() and g.is_zero()):
                d, s, t = poly_ext_gcd(f, g)
                assert s * f + t * g == d and d.is_monic()
                assert (f % d).is_zero() and (g % d).is_zero()
            N = rng.randint(0, 7)
            num = Series([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(N + 1)], N)
            den = Series([Fraction(rng.randint(1, 9), rng.randint(1, 5))]
                         + [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(N)], N)
            assert series_div(num, den) * den == num
        for n in range(1, 31):
            assert sum(comb(n + 1, k) * bernoulli(k) for k in range(n + 1)) == 0


CONFIG = ["--format", "json"]  # default catalog: primes 2..31, every check


def test_criterion_8_parallel_determinism(tmp_path):
    outputs = []
    for jobs in ("1", "8"):
        target = tmp_path / f"jobs{jobs}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "qharmonic", "verify", *CONFIG, "--jobs", jobs,
             "--output", str(target)],
            capture_output=True,
            text=True,
            timeout=300,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    assert len(outputs[0]) > 1000
