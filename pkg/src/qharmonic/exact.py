"""Exact scalar, polynomial and truncated power series arithmetic.

Scalars are :class:`fractions.Fraction` (aliased ``Rat``).  Polynomials are
dense and carry a coefficient-ring tag; the tag is one of :data:`QQ`,
:data:`ZZ` or any object following the same small protocol (``zero``,
``one``, ``coerce``, ``inverse``), such as a quotient ring from
:mod:`qharmonic.rings`.

Over ``QQ`` the hot operations (multiplication, division by a polynomial with
unit leading coefficient) run on integer numerators with a common denominator,
which is far cheaper than coefficient-wise ``Fraction`` arithmetic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Any, Iterable, Sequence

Rat = Fraction

__all__ = [
    "Rat",
    "QQ",
    "ZZ",
    "RingMismatchError",
    "NonUnitError",
    "UniPoly",
    "Series",
    "poly_mul",
    "poly_divrem",
    "poly_ext_gcd",
    "series_div",
    "binomial_poly",
    "format_poly",
    "parse_poly",
]


class RingMismatchError(TypeError):
    """Operands live over different coefficient rings."""


class NonUnitError(ArithmeticError):
    """An element that must be invertible is not.

    ``gcd`` carries the obstruction when one is known (for quotient rings,
    the gcd of the representative with the modulus).
    """

    def __init__(self, message: str, gcd: Any = None):
        super().__init__(message)
        self.gcd = gcd


class _Rationals:
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, str)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} to QQ")

    def inverse(self, x) -> Fraction:
        if not x:
            raise NonUnitError("zero is not invertible in QQ")
        return 1 / x

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return "QQ"


class _Integers:
    name = "ZZ"
    zero = 0
    one = 1

    def coerce(self, x) -> int:
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        raise ValueError(f"{x!r} is not an integer")

    def inverse(self, x) -> int:
        if x in (1, -1):
            return x
        raise NonUnitError(f"{x} is not a unit in ZZ")

    def __repr__(self):
        return "ZZ"

    def __reduce__(self):
        return "ZZ"


QQ = _Rationals()
ZZ = _Integers()


def _common_denominator(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _from_numerators(nums: Sequence[int], den: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(n, den) if n else Fraction(0) for n in nums)


def _int_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                out[i + j] += ai * bj
    return out


def _int_rem_monic(nums: list[int], m: Sequence[int]) -> list[int]:
    """Remainder of an integer vector by a monic integer polynomial, in place."""
    d = len(m) - 1
    for top in range(len(nums) - 1, d - 1, -1):
        c = nums[top]
        if c:
            base = top - d
            for i in range(d):
                if m[i]:
                    nums[base + i] -= c * m[i]
            nums[top] = 0
    return nums[:d]


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of x^i.

    Instances are immutable and always trimmed, so ``==`` is structural.
    ``var`` only affects printing.
    """

    __slots__ = ("coeffs", "ring", "var")

    def __init__(self, coeffs: Iterable = (), ring=QQ, var: str = "x"):
        cs = [ring.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "var", var)

    @classmethod
    def _raw(cls, coeffs: tuple, ring, var: str = "x") -> "UniPoly":
        # coefficients already coerced; only trims
        n = len(coeffs)
        while n and not coeffs[n - 1]:
            n -= 1
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs[:n] if n != len(coeffs) else coeffs)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "var", var)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    def __reduce__(self):
        return (UniPoly, (self.coeffs, self.ring, self.var))

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring=QQ, var: str = "x") -> "UniPoly":
        return cls((), ring, var)

    @classmethod
    def constant(cls, c, ring=QQ, var: str = "x") -> "UniPoly":
        return cls((c,), ring, var)

    @classmethod
    def monomial(cls, k: int, c=1, ring=QQ, var: str = "x") -> "UniPoly":
        return cls([ring.zero] * k + [ring.coerce(c)], ring, var)

    @classmethod
    def gen(cls, ring=QQ, var: str = "x") -> "UniPoly":
        return cls.monomial(1, 1, ring, var)

    # -- basic accessors ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.ring.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.ring == other.ring and self.coeffs == other.coeffs
        try:
            return self.coeffs == UniPoly.constant(other, self.ring).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.ring.name, self.coeffs))

    def _check(self, other: "UniPoly") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            self._check(other)
            return other
        return UniPoly.constant(other, self.ring, self.var)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly._raw(tuple(out), self.ring, self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw(tuple(-c for c in self.coeffs), self.ring, self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            return poly_mul(self, other)
        c = self.ring.coerce(other)
        return UniPoly._raw(tuple(x * c for x in self.coeffs), self.ring, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = UniPoly.constant(self.ring.one, self.ring, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        return poly_divrem(self, self._lift(other))

    def __floordiv__(self, other):
        return poly_divrem(self, self._lift(other))[0]

    def __mod__(self, other):
        return poly_divrem(self, self._lift(other))[1]

    def exact_div(self, other) -> "UniPoly":
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        quo, rem = poly_divrem(self, self._lift(other))
        if rem:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quo

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        return self * self.ring.inverse(self.lc)

    def __call__(self, x):
        acc = self.ring.zero if not isinstance(x, UniPoly) else UniPoly.zero(x.ring, x.var)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def change_ring(self, ring) -> "UniPoly":
        return UniPoly(self.coeffs, ring, self.var)

    def with_var(self, var: str) -> "UniPoly":
        return UniPoly._raw(self.coeffs, self.ring, var)

    def derivative(self) -> "UniPoly":
        return UniPoly._raw(
            tuple(c * i for i, c in enumerate(self.coeffs) if i), self.ring, self.var
        )

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return format_poly(self.coeffs, self.var)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r}, {self.ring!r})"


def format_poly(coeffs: Sequence, var: str = "x") -> str:
    """Render coefficients in ascending powers, e.g. ``2 - 2*q + 1/3*q^2``."""
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if isinstance(c, (int, Fraction)):
            neg = c < 0
            mag = -c if neg else c
            body = str(mag)
        else:
            neg, body = False, f"({c})"
        if i == 0:
            term = body
        else:
            mono = var if i == 1 else f"{var}^{i}"
            term = mono if body == "1" else f"{body}*{mono}"
        if not terms:
            terms.append(("-" if neg else "") + term)
        else:
            terms.append((" - " if neg else " + ") + term)
    return "".join(terms) if terms else "0"


_TERM = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)\*?)?(?:([A-Za-z]\w*)(?:\^(\d+))?)?")


def parse_poly(text: str, var: str = "x") -> UniPoly:
    """Inverse of :func:`format_poly` for rational coefficients."""
    body = text.replace(" ", "")
    if body == "0":
        return UniPoly.zero(QQ, var)
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos or (pos and not m.group(1)):
            raise ValueError(f"cannot parse polynomial {text!r}")
        sign, c, name, e = m.groups()
        if c is None and name is None:
            raise ValueError(f"cannot parse polynomial {text!r}")
        if name is not None and name != var:
            raise ValueError(f"unexpected variable {name!r} in {text!r}")
        k = 0 if name is None else int(e or 1)
        value = Fraction(c or 1) * (-1 if sign == "-" else 1)
        coeffs[k] = coeffs.get(k, Fraction(0)) + value
        pos = m.end()
    top = max(coeffs)
    return UniPoly([coeffs.get(i, 0) for i in range(top + 1)], QQ, var)


def poly_mul(f: UniPoly, g: UniPoly) -> UniPoly:
    """Exact product of two polynomials over the same ring."""
    f._check(g)
    if not f.coeffs or not g.coeffs:
        return UniPoly.zero(f.ring, f.var)
    if f.ring is QQ:
        fn, fd = _common_denominator(f.coeffs)
        gn, gd = _common_denominator(g.coeffs)
        return UniPoly._raw(_from_numerators(_int_convolve(fn, gn), fd * gd), QQ, f.var)
    if f.ring is ZZ:
        return UniPoly._raw(tuple(_int_convolve(f.coeffs, g.coeffs)), ZZ, f.var)
    a, b = f.coeffs, g.coeffs
    zero = f.ring.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return UniPoly._raw(tuple(out), f.ring, f.var)


def poly_divrem(f: UniPoly, m: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Euclidean division ``f = quo*m + rem`` with ``deg rem < deg m``.

    The leading coefficient of ``m`` must be invertible in the coefficient ring.
    """
    f._check(m)
    if not m.coeffs:
        raise ZeroDivisionError("polynomial division by zero")
    ring = f.ring
    d = m.degree
    if f.degree < d:
        return UniPoly.zero(ring, f.var), f
    inv_lc = ring.inverse(m.lc)
    if ring is QQ and inv_lc == 1 and all(c.denominator == 1 for c in m.coeffs):
        return _divrem_qq_monic_int(f, [c.numerator for c in m.coeffs])
    rem = list(f.coeffs)
    quo = [ring.zero] * (f.degree - d + 1)
    mc = m.coeffs
    for top in range(f.degree, d - 1, -1):
        c = rem[top]
        if not c:
            continue
        c = c * inv_lc
        quo[top - d] = c
        base = top - d
        for i in range(d + 1):
            if mc[i]:
                rem[base + i] = rem[base + i] - c * mc[i]
    return UniPoly._raw(tuple(quo), ring, f.var), UniPoly._raw(tuple(rem[:d]), ring, f.var)


def _divrem_qq_monic_int(f: UniPoly, m: list[int]) -> tuple[UniPoly, UniPoly]:
    nums, den = _common_denominator(f.coeffs)
    d = len(m) - 1
    quo = [0] * (len(nums) - d)
    for top in range(len(nums) - 1, d - 1, -1):
        c = nums[top]
        if c:
            quo[top - d] = c
            base = top - d
            for i in range(d + 1):
                if m[i]:
                    nums[base + i] -= c * m[i]
    return (
        UniPoly._raw(_from_numerators(quo, den), QQ, f.var),
        UniPoly._raw(_from_numerators(nums[:d], den), QQ, f.var),
    )


def reduce_qq_by_monic_int(f: UniPoly, m: Sequence[int]) -> UniPoly:
    """Remainder of a rational polynomial by a monic integer polynomial.

    Stays in integer arithmetic throughout; the denominator is untouched.
    """
    if len(f.coeffs) < len(m):
        return f
    nums, den = _common_denominator(f.coeffs)
    return UniPoly._raw(_from_numerators(_int_rem_monic(nums, m), den), QQ, f.var)


def poly_ext_gcd(f: UniPoly, g: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return ``(d, a, b)`` with ``a*f + b*g = d`` and ``d`` the monic gcd.

    Requires a field as coefficient ring.
    """
    f._check(g)
    if not f and not g:
        raise ValueError("ext_gcd of two zero polynomials")
    ring, var = f.ring, f.var
    one = UniPoly.constant(ring.one, ring, var)
    zero = UniPoly.zero(ring, var)
    r0, r1 = f, g
    s0, s1 = one, zero
    t0, t1 = zero, one
    while r1:
        quo, rem = poly_divrem(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    c = ring.inverse(r0.lc)
    return r0 * c, s0 * c, t0 * c


def binomial_poly(k: int) -> UniPoly:
    """``C(p, k) = p(p-1)...(p-k+1)/k!`` as a polynomial in the symbol ``p``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    nums = [1]
    for i in range(k):
        # multiply by (p - i)
        nums = _int_convolve(nums, [-i, 1])
    return UniPoly._raw(_from_numerators(nums, factorial(k)), QQ, "p")


class Series:
    """Power series truncated after the x^order term.

    Coefficients past ``order`` are unknown, not zero; every operation keeps
    the truncation order of its operands, which must agree.
    """

    __slots__ = ("coeffs", "order", "ring")

    def __init__(self, coeffs: Iterable, order: int, ring=QQ):
        if order < 0:
            raise ValueError("order must be nonnegative")
        cs = [ring.coerce(c) for c in coeffs][: order + 1]
        cs += [ring.zero] * (order + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def from_poly(cls, f: UniPoly, order: int) -> "Series":
        return cls(f.coeffs, order, f.ring)

    def _check(self, other: "Series") -> None:
        if not isinstance(other, Series):
            raise TypeError("expected a Series")
        if other.ring != self.ring:
            raise RingMismatchError("series over different rings")
        if other.order != self.order:
            raise ValueError(f"truncation order mismatch: {self.order} vs {other.order}")

    def __getitem__(self, i: int):
        return self.coeffs[i]

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        return Series([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order, self.ring)

    def __neg__(self) -> "Series":
        return Series([-a for a in self.coeffs], self.order, self.ring)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            c = self.ring.coerce(other)
            return Series([a * c for a in self.coeffs], self.order, self.ring)
        self._check(other)
        n = self.order + 1
        out = [self.ring.zero] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n - i):
                    out[i + j] += a * other.coeffs[j]
        return Series(out, self.order, self.ring)

    __rmul__ = __mul__

    def __truediv__(self, other: "Series") -> "Series":
        return series_div(self, other)

    def to_poly(self, var: str = "x") -> UniPoly:
        return UniPoly(self.coeffs, self.ring, var)

    def __repr__(self):
        return f"Series({list(self.coeffs)!r}, order={self.order})"

    def __str__(self):
        return format_poly(self.coeffs) + f" + O(x^{self.order + 1})"


def series_div(f: Series, g: Series) -> Series:
    """Quotient ``h`` with ``h*g = f`` through the common truncation order."""
    f._check(g)
    g0 = g.coeffs[0]
    if not g0:
        raise NonUnitError("series divisor has zero constant term")
    inv0 = g.ring.inverse(g0)
    h: list = []
    for n in range(f.order + 1):
        acc = f.coeffs[n]
        for k in range(1, n + 1):
            acc = acc - g.coeffs[k] * h[n - k]
        h.append(acc * inv0)
    return Series(h, f.order, f.ring)


def binomial_int(n: int, k: int) -> int:
    """Integer binomial with the convention C(n, k) = 0 outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)
