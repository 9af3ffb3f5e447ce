"""Quotient rings Q[q]/(m(q)) and cyclotomic polynomials.

The two families used throughout the package are

* ``Modulus(p, e)``: Q[q]/([p]_q^e), where every "mod [p]_q^e" congruence is
  decided by reducing the difference of both sides to zero;
* ``QuotientRing(cyclotomic(s))``: Q[t]/(Phi_s(t)), where the class of ``t``
  is a primitive s-th root of unity.

Nothing here uses floating point or complex numbers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .exact import (
    QQ,
    ZZ,
    NonUnitError,
    RingMismatchError,
    UniPoly,
    format_poly,
    _common_denominator,
    _int_convolve,
    _int_rem_monic,
    poly_ext_gcd,
)

__all__ = [
    "QuotientRing",
    "Modulus",
    "Residue",
    "reduce",
    "residue_inv",
    "q_int",
    "q_int_poly",
    "q_power",
    "one_minus_q",
    "cyclotomic",
    "is_prime",
]


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (inputs here are small)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class QuotientRing:
    """The ring Q[var]/(modulus) for a monic rational polynomial ``modulus``."""

    def __init__(self, modulus: UniPoly, var: str | None = None):
        if modulus.degree < 1:
            raise ValueError("modulus must have positive degree")
        modulus = modulus.change_ring(QQ) if modulus.ring is not QQ else modulus
        if not modulus.is_monic():
            raise ValueError("modulus must be monic")
        self.var = var or modulus.var
        self.modulus_poly = modulus.with_var(self.var)
        self.degree = modulus.degree
        if all(c.denominator == 1 for c in modulus.coeffs):
            self._int_mod = [c.numerator for c in modulus.coeffs]
        else:
            self._int_mod = None
        self.name = f"Q[{self.var}]/({self.modulus_poly})"
        self._key = self.modulus_poly.coeffs

    # ring protocol used by UniPoly
    @property
    def zero(self) -> "Residue":
        return Residue._make((), 1, self)

    @property
    def one(self) -> "Residue":
        return Residue._make((1,), 1, self)

    def coerce(self, x) -> "Residue":
        if isinstance(x, Residue):
            if x.ring != self:
                raise RingMismatchError(f"residue of {x.ring.name} used in {self.name}")
            return x
        if isinstance(x, UniPoly):
            return reduce(x, self)
        x = QQ.coerce(x)
        return Residue._make((x.numerator,), x.denominator, self)

    def inverse(self, x) -> "Residue":
        return residue_inv(self.coerce(x))

    def gen(self) -> "Residue":
        return reduce(UniPoly.gen(QQ, self.var), self)

    def _reduce_nums(self, nums: list[int], den: int) -> tuple[list[int], int]:
        """Reduce the polynomial ``nums/den`` modulo the ring's modulus."""
        if len(nums) <= self.degree:
            return nums, den
        if self._int_mod is not None:
            return _int_rem_monic(list(nums), self._int_mod), den
        f = UniPoly((Fraction(n, den) for n in nums), QQ, self.var) % self.modulus_poly
        return _common_denominator(f.coeffs)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, QuotientRing):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"QuotientRing({self.modulus_poly})"


class Modulus(QuotientRing):
    """Q[q]/([p]_q^e) for a prime ``p`` and exponent ``e >= 1``."""

    def __init__(self, prime: int, exponent: int = 1):
        if not is_prime(prime):
            raise ValueError(f"{prime} is not prime")
        if exponent < 1:
            raise ValueError("exponent must be >= 1")
        self.prime = prime
        self.exponent = exponent
        super().__init__(q_int_poly(prime) ** exponent, "q")
        self.name = f"Q[q]/([{prime}]_q^{exponent})"

    def __reduce__(self):
        return (Modulus, (self.prime, self.exponent))

    def __repr__(self):
        return f"Modulus({self.prime}, {self.exponent})"

    __hash__ = QuotientRing.__hash__


class Residue:
    """Canonical coset representative in a :class:`QuotientRing`.

    Stored as integer numerators over one positive denominator, reduced to
    lowest terms; :attr:`rep` gives the representative as a ``UniPoly``.
    """

    __slots__ = ("num", "den", "ring")

    def __init__(self, rep: UniPoly, ring: QuotientRing):
        rep = rep.change_ring(QQ) if rep.ring is not QQ else rep
        nums, den = _common_denominator(rep.coeffs)
        object.__setattr__(self, "ring", ring)
        self._set(*ring._reduce_nums(nums, den))

    def _set(self, nums, den):
        n = len(nums)
        while n and not nums[n - 1]:
            n -= 1
        if not n:
            object.__setattr__(self, "num", ())
            object.__setattr__(self, "den", 1)
            return
        g = gcd(den, *nums[:n])
        if g != 1:
            nums = [x // g for x in nums[:n]]
            den //= g
        object.__setattr__(self, "num", tuple(nums[:n]))
        object.__setattr__(self, "den", den)

    @classmethod
    def _make(cls, nums, den: int, ring: QuotientRing) -> "Residue":
        # nums already reduced modulo the ring; only normalizes
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        obj._set(nums, den)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Residue is immutable")

    def __reduce__(self):
        return (Residue, (self.rep, self.ring))

    @property
    def rep(self) -> UniPoly:
        return UniPoly(
            (Fraction(n, self.den) for n in self.num), QQ, self.ring.var
        )

    @property
    def modulus(self) -> QuotientRing:
        return self.ring

    def _other(self, other) -> "Residue":
        if isinstance(other, Residue):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(
                    f"cannot combine residues of {self.ring.name} and {other.ring.name}"
                )
            return other
        return self.ring.coerce(other)

    def _addsub(self, other: "Residue", sign: int) -> "Residue":
        a, b = self.num, other.num
        da, db = self.den, other.den
        if da == db:
            den, fa, fb = da, 1, sign
        else:
            den = lcm(da, db)
            fa, fb = den // da, sign * (den // db)
        n = max(len(a), len(b))
        out = [0] * n
        for i, x in enumerate(a):
            out[i] = x * fa
        for i, x in enumerate(b):
            out[i] += x * fb
        return Residue._make(out, den, self.ring)

    def __add__(self, other):
        return self._addsub(self._other(other), 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(self._other(other), -1)

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return Residue._make([-x for x in self.num], self.den, self.ring)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Residue._make(
                [x * other.numerator for x in self.num], self.den * other.denominator, self.ring
            )
        other = self._other(other)
        if not self.num or not other.num:
            return self.ring.zero
        nums, den = self.ring._reduce_nums(
            _int_convolve(self.num, other.num), self.den * other.den
        )
        return Residue._make(nums, den, self.ring)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * QQ.inverse(Fraction(other))
        return self * residue_inv(self._other(other))

    def __rtruediv__(self, other):
        return self._other(other) * residue_inv(self)

    def __pow__(self, k: int):
        if k < 0:
            return residue_inv(self) ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "Residue":
        return residue_inv(self)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def constant_value(self) -> Fraction | None:
        """The rational value if the representative is constant, else ``None``."""
        if len(self.num) <= 1:
            return Fraction(self.num[0] if self.num else 0, self.den)
        return None

    def __eq__(self, other):
        if isinstance(other, Residue):
            other = self._other(other)
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            c = self.constant_value()
            return c is not None and c == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.num, self.den))

    def __str__(self):
        return format_poly([Fraction(n, self.den) for n in self.num], self.ring.var)

    def __repr__(self):
        return f"Residue({self}, {self.ring.name})"


def reduce(f: UniPoly, m: QuotientRing) -> Residue:
    """Canonical remainder of ``f`` modulo ``m``."""
    if f.ring is ZZ:
        f = f.change_ring(QQ)
    elif f.ring is not QQ:
        raise RingMismatchError("reduce expects rational or integer coefficients")
    return Residue(f, m)


@lru_cache(maxsize=None)
def _inverse_cached(a: Residue) -> Residue:
    d, s, _ = poly_ext_gcd(a.rep, a.ring.modulus_poly.with_var(a.rep.var))
    if d.degree != 0:
        raise NonUnitError(f"{a} is not invertible in {a.ring.name}", gcd=d)
    return Residue(s, a.ring)


def residue_inv(a: Residue) -> Residue:
    """Inverse by extended Euclid; raises :class:`NonUnitError` on a zero divisor."""
    if not a.rep:
        raise NonUnitError(f"zero is not invertible in {a.ring.name}", gcd=a.ring.modulus_poly)
    return _inverse_cached(a)


@lru_cache(maxsize=None)
def q_int_poly(k: int, var: str = "q") -> UniPoly:
    """[k]_q = 1 + q + ... + q^(k-1) as a polynomial."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return UniPoly([1] * k, QQ, var)


def q_int(k: int, m: QuotientRing) -> Residue:
    """Residue of [k]_q."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _q_int_cached(k, m)


@lru_cache(maxsize=None)
def _q_int_cached(k: int, m: QuotientRing) -> Residue:
    return reduce(q_int_poly(k, m.var), m)


@lru_cache(maxsize=None)
def q_power(k: int, m: QuotientRing) -> Residue:
    """Residue of q^k for ``k >= 0``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k <= 2 * m.degree:
        return reduce(UniPoly.monomial(k, 1, QQ, m.var), m)
    half = q_power(k // 2, m)
    r = half * half
    return r * m.gen() if k % 2 else r


def one_minus_q(m: QuotientRing) -> Residue:
    return reduce(UniPoly([1, -1], QQ, m.var), m)


@lru_cache(maxsize=None)
def cyclotomic(s: int) -> UniPoly:
    """The s-th cyclotomic polynomial over ZZ in the variable ``t``."""
    if s < 1:
        raise ValueError("s must be >= 1")
    f = UniPoly.monomial(s, 1, ZZ, "t") - 1
    for d in range(1, s):
        if s % d == 0:
            f = f.exact_div(cyclotomic(d))
    return f
