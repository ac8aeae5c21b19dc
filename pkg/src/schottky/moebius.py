"""Moebius transformations over an abstract field.

Entries may be ``complex``, :class:`fractions.Fraction` or
:class:`~schottky.algebra.PolyFraction`. Matrices are kept unnormalized and
compared up to scalar. The point at infinity is the explicit marker
:data:`INF`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Any, Tuple

from .algebra import MultiPoly, PolyFraction


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return "INF"


INF = _Infinity()


class DegenerateError(ValueError):
    """A configuration that makes a formula's denominator vanish."""


def _div(x, y):
    if isinstance(x, int) and isinstance(y, int):
        return Fraction(x, y)
    return x / y


def _is_zero(x) -> bool:
    if isinstance(x, PolyFraction):
        return x.is_zero()
    return x == 0


def _one_like(x):
    if isinstance(x, PolyFraction):
        return PolyFraction.from_int(1, x.nvars)
    if isinstance(x, Fraction):
        return Fraction(1)
    return 1


def _zero_like(x):
    if isinstance(x, PolyFraction):
        return PolyFraction.from_int(0, x.nvars)
    if isinstance(x, Fraction):
        return Fraction(0)
    return 0


@dataclass(frozen=True)
class FixedPointForm:
    """Attractive fixed point, repulsive fixed point and multiplier."""

    t_plus: Any
    t_minus: Any
    s: Any

    def __post_init__(self):
        if _is_zero(self.t_plus - self.t_minus):
            raise DegenerateError("fixed points coincide")
        if _is_zero(self.s):
            raise DegenerateError("multiplier is zero")

    def check_contracting(self):
        """Numeric gate ``|s| < 1``; symbolic data pass trivially."""
        if isinstance(self.s, PolyFraction):
            return
        if not abs(self.s) < 1:
            raise DegenerateError(f"multiplier {self.s!r} is not contracting")


class MoebiusMap:
    """``z -> (a z + b) / (c z + d)``, matrix understood modulo scalars."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d
        if _is_zero(a * d - b * c):
            raise DegenerateError("singular matrix")

    @classmethod
    def identity(cls, like=1) -> "MoebiusMap":
        one, zero = _one_like(like), _zero_like(like)
        return cls(one, zero, zero, one)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def as_tuple(self) -> Tuple:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def equals(self, other: "MoebiusMap", tol: float | None = None) -> bool:
        """Equality in PGL_2: all 2x2 minors of the stacked entry vectors vanish."""
        u, v = self.as_tuple(), other.as_tuple()
        for i in range(4):
            for j in range(i + 1, 4):
                m = u[i] * v[j] - u[j] * v[i]
                if tol is None:
                    if not _is_zero(m):
                        return False
                else:
                    scale = max(abs(x) for x in u) * max(abs(x) for x in v)
                    if abs(m) > tol * scale:
                        return False
        return True

    def __repr__(self):
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


def apply(m: MoebiusMap, z):
    """Image of ``z``; the pole maps to :data:`INF` and ``INF`` maps to ``a/c``."""
    if z is INF:
        if _is_zero(m.c):
            return INF
        return _div(m.a, m.c)
    den = m.c * z + m.d
    if _is_zero(den):
        return INF
    return _div(m.a * z + m.b, den)


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """``f o g`` (apply ``g`` first)."""
    return MoebiusMap(
        f.a * g.a + f.b * g.c,
        f.a * g.b + f.b * g.d,
        f.c * g.a + f.d * g.c,
        f.c * g.b + f.d * g.d,
    )


def derivative(m: MoebiusMap, z):
    """``(ad - bc) / (cz + d)^2``."""
    if z is INF:
        raise DegenerateError("derivative at infinity is not defined in this chart")
    den = m.c * z + m.d
    if _is_zero(den):
        raise DegenerateError("derivative at the pole")
    return _div(m.det, den * den)


def from_fixed_points(f: FixedPointForm) -> MoebiusMap:
    """``M diag(1, s) adj(M)`` with ``M = [[t+, t-], [1, 1]]``.

    Using the adjugate instead of the inverse keeps the entries polynomial in
    the data; the matrix is only defined up to scalar anyway.
    """
    tp, tm, s = f.t_plus, f.t_minus, f.s
    one = _one_like(tp)
    return MoebiusMap(tp - s * tm, (s - one) * tp * tm, one - s, s * tp - tm)


def _sqrt_exact(x):
    if isinstance(x, complex) or isinstance(x, float):
        return cmath.sqrt(x)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if x < 0:
            raise DegenerateError("negative discriminant has no rational square root")
        n, d = isqrt(x.numerator), isqrt(x.denominator)
        if n * n != x.numerator or d * d != x.denominator:
            raise DegenerateError("discriminant is not a rational square")
        return Fraction(n, d)
    if isinstance(x, PolyFraction):
        num = poly_sqrt(x.num)
        if x.const != isqrt(x.const) ** 2 or any(m % 2 for _, m in x.factors):
            raise DegenerateError("denominator is not a square")
        den = MultiPoly.constant(isqrt(x.const), x.nvars)
        for f, m in x.factors:
            den = den * f ** (m // 2)
        return PolyFraction(num, den)
    raise TypeError(f"no square root for {type(x).__name__}")


def poly_sqrt(p: MultiPoly) -> MultiPoly:
    """Exact square root of a polynomial that is a perfect square (up to sign)."""
    if p.is_zero():
        return p
    le, lc = p.leading()
    if any(k % 2 for k in le) or lc < 0 or isqrt(lc) ** 2 != lc:
        raise DegenerateError("polynomial is not a perfect square")
    root_e = tuple(k // 2 for k in le)
    r = MultiPoly(p.nvars, {root_e: isqrt(lc)})
    rem = p - r * r
    two_lead_e, two_lead_c = root_e, 2 * isqrt(lc)
    # leading monomials of the remainder strictly decrease, so this terminates
    while True:
        if rem.is_zero():
            return r
        e, c = rem.leading()
        d = tuple(x - y for x, y in zip(e, two_lead_e))
        if min(d) < 0 or c % two_lead_c:
            raise DegenerateError("polynomial is not a perfect square")
        t = MultiPoly(p.nvars, {d: c // two_lead_c})
        rem = rem - t * (r * 2 + t)
        r = r + t


def fixed_point_forms(m: MoebiusMap) -> Tuple[FixedPointForm, FixedPointForm]:
    """Both orientations ``(t+, t-, s)`` and ``(t-, t+, 1/s)`` of a loxodromic map.

    Requires ``c != 0`` (both fixed points finite).
    """
    a, b, c, d = m.as_tuple()
    if _is_zero(c):
        raise DegenerateError("a fixed point lies at infinity")
    disc = (d - a) * (d - a) + 4 * b * c
    if _is_zero(disc):
        raise DegenerateError("parabolic map (double fixed point)")
    root = _sqrt_exact(disc)
    r1 = ((a - d) + root) / (2 * c)
    r2 = ((a - d) - root) / (2 * c)
    s1 = derivative(m, r1)
    s2 = derivative(m, r2)
    return FixedPointForm(r1, r2, s1), FixedPointForm(r2, r1, s2)


def fixed_point_form(m: MoebiusMap) -> FixedPointForm:
    """The orientation with ``|s| < 1`` (numeric or rational maps)."""
    f1, f2 = fixed_point_forms(m)
    if isinstance(f1.s, PolyFraction):
        raise TypeError("attractivity is undecidable symbolically; use fixed_point_forms")
    return f1 if abs(f1.s) < abs(f2.s) else f2


def cross_ratio(a, b, c, d):
    """``(a - c)(b - d) / ((a - d)(b - c))``; at most one argument may be INF.

    Factors containing INF cancel in pairs (the usual limit convention).
    """
    args = (a, b, c, d)
    if sum(x is INF for x in args) > 1:
        raise DegenerateError("more than one point at infinity")

    def diff(x, y):
        return None if (x is INF or y is INF) else x - y

    num = [diff(a, c), diff(b, d)]
    den = [diff(a, d), diff(b, c)]
    top = None
    for t in num:
        if t is not None:
            top = t if top is None else top * t
    bot = None
    for t in den:
        if t is not None:
            bot = t if bot is None else bot * t
    if bot is None or _is_zero(bot):
        raise DegenerateError("degenerate quadruple (vanishing denominator)")
    if top is None:
        return _one_like(bot)
    return _div(top, bot)
