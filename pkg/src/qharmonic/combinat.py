"""Bernoulli numbers of both kinds, Stirling numbers of the first kind, and
the constants K_n(p) that govern depth-one congruences.

Everything is derived from a generating function or a defining product and
memoized; no sample values are hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import QQ, ZZ, Series, UniPoly, series_div

__all__ = [
    "bernoulli",
    "bernoulli2",
    "bernoulli_series",
    "bernoulli2_series",
    "stirling1",
    "k_value",
    "k_poly",
    "KSpec",
    "B4_SECOND_KIND_NOTE",
]

# The printed x^4 term of x/log(1+x) disagrees with the generating function.
B4_SECOND_KIND_NOTE = (
    "b_4 = -19/30 from x/log(1+x); the commonly printed -19/24 is inconsistent "
    "with that generating function"
)


@lru_cache(maxsize=None)
def bernoulli_series(order: int) -> Series:
    """x/(e^x - 1) through x^order, as ordinary (not exponential) coefficients."""
    # (e^x - 1)/x = sum x^k/(k+1)!
    denom = Series([Fraction(1, factorial(k + 1)) for k in range(order + 1)], order)
    return series_div(Series([1], order), denom)


@lru_cache(maxsize=None)
def bernoulli2_series(order: int) -> Series:
    """x/log(1+x) through x^order."""
    # log(1+x)/x = sum (-1)^k x^k/(k+1)
    denom = Series([Fraction((-1) ** k, k + 1) for k in range(order + 1)], order)
    return series_div(Series([1], order), denom)


def _grow(n: int) -> int:
    # build tables in chunks so repeated small queries share one division
    return max(32, 1 << max(n, 1).bit_length())


def bernoulli(n: int) -> Fraction:
    """B_n, with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return bernoulli_series(_grow(n))[n] * factorial(n)


def bernoulli2(n: int) -> Fraction:
    """b_n with x/log(1+x) = sum b_n x^n/n! (Bernoulli numbers of the second kind)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return bernoulli2_series(_grow(n))[n] * factorial(n)


@lru_cache(maxsize=None)
def _falling_factorial(n: int) -> UniPoly:
    f = UniPoly([1], ZZ)
    for i in range(n):
        f = f * UniPoly([-i, 1], ZZ)
    return f


def stirling1(n: int, j: int) -> int:
    """Signed Stirling number s(n, j): coefficient of x^j in x(x-1)...(x-n+1).

    Returns 0 for ``j > n``.
    """
    if n < 0 or j < 0:
        raise ValueError("n and j must be nonnegative")
    return _falling_factorial(n)[j]


def k_value(n: int, p: int) -> Fraction:
    """K_n(p) evaluated at an integer ``p``."""
    if n < 2:
        raise ValueError("K_n is defined for n >= 2")
    head = (-1) ** (n - 1) * bernoulli2(n) / factorial(n)
    tail = sum(
        (
            bernoulli(2 * j) / (2 * j) * stirling1(n - 1, 2 * j - 1) * p ** (2 * j)
            for j in range(1, n // 2 + 1)
        ),
        Fraction(0),
    )
    return head - Fraction((-1) ** n, factorial(n - 1)) * tail


@dataclass(frozen=True)
class KSpec:
    """K_n as a polynomial in the formal symbol ``p``."""

    n: int
    as_poly: UniPoly

    def __call__(self, p) -> Fraction:
        return self.as_poly(Fraction(p))


@lru_cache(maxsize=None)
def k_poly(n: int) -> KSpec:
    """K_n(p) with ``p`` kept symbolic."""
    if n < 2:
        raise ValueError("K_n is defined for n >= 2")
    coeffs = [Fraction(0)] * (2 * (n // 2) + 1)
    coeffs[0] = (-1) ** (n - 1) * bernoulli2(n) / factorial(n)
    scale = Fraction((-1) ** n, factorial(n - 1))
    for j in range(1, n // 2 + 1):
        coeffs[2 * j] = -scale * bernoulli(2 * j) / (2 * j) * stirling1(n - 1, 2 * j - 1)
    return KSpec(n, UniPoly(coeffs, QQ, "p"))
