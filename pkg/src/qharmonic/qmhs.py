"""q-analogs of multiple harmonic sums.

For exponents s = (s_1, ..., s_l), modifier t = (t_1, ..., t_l) and n >= 0::

    H^(t)(s; n) = sum_{1 <= k_1 < ... < k_l <= n}
                      q^(k_1 t_1 + ... + k_l t_l) / ([k_1]_q^s_1 ... [k_l]_q^s_l)

and the normalized sum divides by (1 - q)^(s_1 + ... + s_l).  Sums are
evaluated as residues in a :class:`~qharmonic.rings.QuotientRing`.

Besides the direct evaluator this module holds the algebra around
homogeneous sums H({s}^l): the quasi-shuffle product, the depth recursion
through depth-one sums, the generating function of the depth-one constants
P_n, the root-of-unity product expansion of the homogeneous generating
function, and the closed forms in ``p`` for weights 1, 2 and 3.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .exact import QQ, Series, UniPoly, binomial_poly, series_div
from .rings import Modulus, QuotientRing, Residue, cyclotomic, one_minus_q, q_int, q_power

__all__ = [
    "ConsistencyError",
    "Index",
    "StuffleTerm",
    "h_sum",
    "h_norm",
    "stuffle_expand",
    "homo_recursion",
    "p_series",
    "homo_product_coeffs",
    "closed_form_w1",
    "closed_form_w2",
    "closed_form_w3",
    "homo_prefactor",
    "homo_factor",
    "binomial_shift",
]


class ConsistencyError(ArithmeticError):
    """An identity the construction relies on failed (an implementation bug
    or a defective closed form)."""


@dataclass(frozen=True, order=True)
class Index:
    """Exponents ``s`` with modifier ``t``; ``t`` defaults to all zeros."""

    s: tuple[int, ...]
    t: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        s = tuple(int(x) for x in self.s)
        t = tuple(0 for _ in s) if self.t is None else tuple(int(x) for x in self.t)
        if len(s) != len(t):
            raise ValueError(f"exponents {s} and modifier {t} differ in length")
        if any(x < 1 for x in s):
            raise ValueError(f"exponents must be positive, got {s}")
        if any(x < 0 for x in t):
            raise ValueError(f"modifier entries must be nonnegative, got {t}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @classmethod
    def parse(cls, s_text: str, t_text: str | None = None) -> "Index":
        """Parse ``"s1,s2,..."`` and an optional ``"t1,t2,..."``."""

        def ints(text):
            text = text.strip()
            if not text:
                return ()
            try:
                return tuple(int(x) for x in text.split(","))
            except ValueError:
                raise ValueError(f"malformed integer list: {text!r}") from None

        return cls(ints(s_text), None if t_text is None else ints(t_text))

    @classmethod
    def homogeneous(cls, s: int, depth: int) -> "Index":
        return cls((s,) * depth)

    @property
    def weight(self) -> int:
        return sum(self.s)

    @property
    def depth(self) -> int:
        return len(self.s)

    def head(self) -> tuple[int, int]:
        return self.s[0], self.t[0]

    def tail(self) -> "Index":
        return Index(self.s[1:], self.t[1:])

    def prepend(self, s: int, t: int) -> "Index":
        return Index((s,) + self.s, (t,) + self.t)

    def __str__(self):
        if any(self.t):
            return f"({','.join(map(str, self.s))})@({','.join(map(str, self.t))})"
        return f"({','.join(map(str, self.s))})"


EMPTY = Index(())


@dataclass(frozen=True)
class StuffleTerm:
    index: Index
    multiplicity: int


@lru_cache(maxsize=None)
def _inv_q_int_power(k: int, s: int, m: QuotientRing) -> Residue:
    return q_int(k, m).inverse() ** s


@lru_cache(maxsize=4096)
def _letter(k: int, s: int, t: int, m: QuotientRing) -> Residue:
    inv = _inv_q_int_power(k, s, m)
    return inv * q_power(k * t, m) if t else inv


def h_sum(idx: Index, n: int, m: QuotientRing) -> Residue:
    """Residue of H^(t)(s; n).

    Prefix accumulators ``acc[j]`` hold the sum over the first ``j`` letters
    with ``k_j <= k``; sweeping ``j`` downward lets each ``k`` be used once.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    depth = idx.depth
    acc = [m.one] + [m.zero] * depth
    for k in range(1, n + 1):
        for j in range(min(depth, k), 0, -1):
            if acc[j - 1]:
                acc[j] = acc[j] + acc[j - 1] * _letter(k, idx.s[j - 1], idx.t[j - 1], m)
    return acc[depth]


@lru_cache(maxsize=None)
def _inv_one_minus_q_power(w: int, m: QuotientRing) -> Residue:
    return one_minus_q(m).inverse() ** w


def h_norm(idx: Index, n: int, m: QuotientRing) -> Residue:
    """H^(t)(s; n) / (1 - q)^weight."""
    return h_sum(idx, n, m) * _inv_one_minus_q_power(idx.weight, m)


@lru_cache(maxsize=None)
def _stuffle(a: Index, b: Index) -> Counter:
    if not a.depth:
        return Counter({b: 1})
    if not b.depth:
        return Counter({a: 1})
    (sa, ta), (sb, tb) = a.head(), b.head()
    out: Counter = Counter()
    for idx, c in _stuffle(a.tail(), b).items():
        out[idx.prepend(sa, ta)] += c
    for idx, c in _stuffle(a, b.tail()).items():
        out[idx.prepend(sb, tb)] += c
    for idx, c in _stuffle(a.tail(), b.tail()).items():
        out[idx.prepend(sa + sb, ta + tb)] += c
    return out


def stuffle_expand(a: Index, b: Index) -> list[StuffleTerm]:
    """Quasi-shuffle product of two indices, merged slots adding both
    exponents and modifiers.  Terms come back sorted by index."""
    return [StuffleTerm(idx, c) for idx, c in sorted(_stuffle(a, b).items())]


def homo_recursion(s: int, depth: int, m: Modulus, n: int | None = None) -> Residue:
    """Normalized homogeneous sum of depth ``depth`` rebuilt from depth-one sums.

    Uses l*a_l = sum_{k<l} (-1)^(l-k-1) a_k * sH((l-k)s), a_0 = 1.
    ``n`` defaults to p - 1.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if n is None:
        n = m.prime - 1
    single = [None] + [h_norm(Index((j * s,)), n, m) for j in range(1, depth + 1)]
    a = [m.one]
    for ell in range(1, depth + 1):
        total = m.zero
        for k in range(ell):
            term = single[ell - k] * a[k]
            total = total + term if (ell - k - 1) % 2 == 0 else total - term
        a.append(total / ell)
    return a[depth]


def p_series(p: int, order: int) -> list[Fraction]:
    """P_0..P_order where P_n = sum_{j=1}^{p-1} (1 - zeta^j)^(-n).

    Generating function p - p*x*(1-x)^(p-1) / (1 - (1-x)^p); the factor x
    cancels against 1 - (1-x)^p = x*u(x) with u(0) = p, leaving a series
    division by a unit.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    u = Series([(-1) ** k * comb(p, k + 1) for k in range(order + 1)], order)
    num = Series([(-1) ** k * comb(p - 1, k) for k in range(order + 1)], order)
    g = Series([p], order) - series_div(num, u) * p
    return list(g.coeffs)


def homo_product_coeffs(s: int, p: int, max_depth: int) -> list[Fraction]:
    """Predicted constants sH({s}^l) mod [p]_q for l = 0..max_depth.

    Expands prod_{n<s} (1 - (1 - eta^n y)^p) in Q[t]/(Phi_s)[y] with eta the
    class of t, then substitutes y^s = -x, divides by x and scales by
    (-1)^s/p^s.  Raises :class:`ConsistencyError` if a coefficient is not
    rational or sits at an exponent not divisible by ``s``.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    ring = QuotientRing(cyclotomic(s), "t")
    eta = ring.gen()
    prod = UniPoly([ring.one], ring, "y")
    for n in range(s):
        root = eta ** n
        factor = [ring.zero] + [-comb(p, k) * (-root) ** k for k in range(1, p + 1)]
        prod = prod * UniPoly(factor, ring, "y")
    coeffs: dict[int, Fraction] = {}
    for k, c in enumerate(prod.coeffs):
        value = c.constant_value()
        if value is None:
            raise ConsistencyError(f"coefficient of y^{k} is not rational: {c}")
        if value and k % s:
            raise ConsistencyError(f"nonzero coefficient at y^{k}, {s} does not divide {k}")
        if k % s == 0:
            coeffs[k // s] = value * (-1) ** (k // s)
    if coeffs.get(0):
        raise ConsistencyError("product has a nonzero constant term")
    scale = Fraction((-1) ** s, p ** s)
    return [coeffs.get(ell + 1, Fraction(0)) * scale for ell in range(max_depth + 1)]


# -- closed forms in the symbol p ----------------------------------------------

_P = UniPoly([0, 1], QQ, "p")


def binomial_shift(k: int, shift: int) -> UniPoly:
    """C(p + shift, k) as a polynomial in p."""
    return binomial_poly(k)(_P + shift)


def _divide_by_p_power(f: UniPoly, e: int) -> UniPoly:
    if any(f[i] for i in range(e)):
        raise ConsistencyError(f"{f} is not divisible by p^{e}")
    return UniPoly(f.coeffs[e:], QQ, "p")


def closed_form_w1(depth: int) -> UniPoly:
    """sH({1}^l) mod [p]_q as C(p-1, l)/(l+1)."""
    return binomial_shift(depth, -1) * Fraction(1, depth + 1)


def closed_form_w2(depth: int) -> UniPoly:
    """sH({2}^l) mod [p]_q as a polynomial in p from the product expansion:

    (-1)^l/p^2 * (sum_{j+k=l} C(p,2j+1)C(p,2k+1) - sum_{j+k=l+1, j,k>=1} C(p,2j)C(p,2k)).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    odd = sum(
        (binomial_poly(2 * j + 1) * binomial_poly(2 * (depth - j) + 1) for j in range(depth + 1)),
        UniPoly.zero(QQ, "p"),
    )
    even = sum(
        (binomial_poly(2 * j) * binomial_poly(2 * (depth + 1 - j)) for j in range(1, depth + 1)),
        UniPoly.zero(QQ, "p"),
    )
    return _divide_by_p_power(odd - even, 2) * (-1) ** depth


def closed_form_w3(depth: int) -> UniPoly:
    """sH({3}^l) mod [p]_q as a polynomial in p, with L = 3l + 3:

    (1/p^3) * (3*(1 + (-1)^l) C(p,L) + 3(-1)^l sum_{k=1}^{L//2} C(p,L-k)C(L-k,k) + C(p,l+1)).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    L = 3 * depth + 3
    sign = (-1) ** depth
    middle = sum(
        (binomial_poly(L - k) * comb(L - k, k) for k in range(1, L // 2 + 1)),
        UniPoly.zero(QQ, "p"),
    )
    total = binomial_poly(L) * (3 * (1 + sign)) + middle * (3 * sign) + binomial_poly(depth + 1)
    return _divide_by_p_power(total, 3)


def homo_prefactor(s: int, depth: int) -> UniPoly:
    """The factor c * C(p-1, l) that the weight-s closed form is claimed to
    carry, leaving a monic cofactor F_{s,l}(p)."""
    base = binomial_shift(depth, -1)
    if s == 1:
        return base * Fraction(1, depth + 1)
    if s == 2:
        return base * Fraction((-1) ** depth * 2 * factorial(depth), factorial(2 * depth + 2))
    if s == 3:
        if depth % 2:
            return base * Fraction(-3 * factorial(depth), factorial(3 * depth + 1))
        return base * Fraction(6 * factorial(depth), factorial(3 * depth + 3))
    raise ValueError("closed forms exist for s in {1, 2, 3}")


def homo_factor(s: int, depth: int) -> UniPoly:
    """F_{s,l}(p) = closed form / prefactor; the division must be exact."""
    form = {1: closed_form_w1, 2: closed_form_w2, 3: closed_form_w3}[s](depth)
    quo, rem = divmod(form, homo_prefactor(s, depth))
    if rem:
        raise ConsistencyError(f"prefactor does not divide the weight-{s} depth-{depth} form")
    return quo


def homogeneous_expected_degree(s: int, depth: int) -> int:
    """Degree of F_{s,l} claimed alongside the closed forms."""
    if s == 1:
        return 0
    if s == 2:
        return depth
    if s == 3:
        return 2 * depth - 1 if depth % 2 else 2 * depth
    raise ValueError("closed forms exist for s in {1, 2, 3}")
