"""Fractions of integer polynomials, the coefficient ring of symbolic mode.

The denominator is kept as ``const * prod f_k^{m_k}`` with normalized factors
(primitive, positive leading coefficient). Sums use the least common multiple
of the factor multisets, so denominators grow only when genuinely new factors
appear; products cancel a denominator factor whenever it divides the
numerator. No multivariate GCD is ever computed: equality is decided by
cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Mapping, Sequence, Tuple

from .poly import MultiPoly, maybe_divisible, split_linear_factors


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class PolyFraction:
    """Element ``num / (const * prod f^m)`` of Frac(Z[v_0..v_{n-1}])."""

    __slots__ = ("num", "const", "factors")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            raise TypeError("use PolyFraction.from_int(value, nvars)")
        if den is None:
            self.num = num
            self.const = 1
            self.factors: Tuple[Tuple[MultiPoly, int], ...] = ()
            self._normalize_content()
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        c, facs = split_linear_factors(den)
        if c < 0:
            num, c = -num, -c
        self.num = num
        self.const = c
        self.factors = _sorted_factors(facs)
        self._cancel()

    @classmethod
    def _make(cls, num: MultiPoly, const: int, factors: Mapping[MultiPoly, int], cancel=True):
        obj = object.__new__(cls)
        obj.num = num
        obj.const = const
        obj.factors = _sorted_factors(factors)
        if cancel:
            obj._cancel()
        else:
            obj._normalize_content()
        return obj

    @classmethod
    def from_int(cls, value: int, nvars: int) -> "PolyFraction":
        return cls(MultiPoly.constant(value, nvars))

    @classmethod
    def from_rational(cls, value, nvars: int) -> "PolyFraction":
        value = Fraction(value)
        return cls._make(MultiPoly.constant(value.numerator, nvars), value.denominator, {}, cancel=False)

    @classmethod
    def variable(cls, k: int, nvars: int) -> "PolyFraction":
        return cls(MultiPoly.variable(k, nvars))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def den(self) -> MultiPoly:
        """The expanded denominator polynomial."""
        d = MultiPoly.constant(self.const, self.nvars)
        for f, m in self.factors:
            d = d * f ** m
        return d

    # -- normalization ------------------------------------------------------
    def _normalize_content(self):
        if self.num.is_zero():
            self.const = 1
            self.factors = ()
            return
        g = gcd(self.num.content(), self.const)
        if g > 1:
            self.num = self.num.scale_div(g)
            self.const //= g

    def _cancel(self):
        if self.num.is_zero():
            self.const = 1
            self.factors = ()
            return
        if self.factors:
            kept = []
            num = self.num
            for f, m in self.factors:
                while m and maybe_divisible(num, f):
                    q = num.exact_div(f)
                    if q is None:
                        break
                    num = q
                    m -= 1
                if m:
                    kept.append((f, m))
            self.num = num
            self.factors = tuple(kept)
        self._normalize_content()

    # -- predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return not self.factors and self.num.is_constant()

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "PolyFraction":
        if isinstance(other, PolyFraction):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return PolyFraction.from_rational(other, self.nvars)
        if isinstance(other, MultiPoly):
            return PolyFraction(other)
        raise TypeError(f"cannot combine PolyFraction with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        fa = dict(self.factors)
        fb = dict(other.factors)
        lcm_f = dict(fa)
        for f, m in fb.items():
            if m > lcm_f.get(f, 0):
                lcm_f[f] = m
        c = _lcm(self.const, other.const)
        na = self.num * (c // self.const)
        nb = other.num * (c // other.const)
        for f, m in lcm_f.items():
            da = m - fa.get(f, 0)
            db = m - fb.get(f, 0)
            if da:
                na = na * f ** da
            if db:
                nb = nb * f ** db
        return PolyFraction._make(na + nb, c, lcm_f)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(PolyFraction)
        obj.num = -self.num
        obj.const = self.const
        obj.factors = self.factors
        return obj

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return PolyFraction.from_int(0, self.nvars)
            g = gcd(other, self.const)
            return PolyFraction._make(self.num * (other // g), self.const // g, dict(self.factors), cancel=False)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PolyFraction.from_int(0, self.nvars)
        facs = dict(self.factors)
        for f, m in other.factors:
            facs[f] = facs.get(f, 0) + m
        return PolyFraction._make(self.num * other.num, self.const * other.const, facs)

    __rmul__ = __mul__

    def inverse(self) -> "PolyFraction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero fraction")
        c, facs = split_linear_factors(self.num)
        num = MultiPoly.constant(self.const, self.nvars)
        for f, m in self.factors:
            num = num * f ** m
        if c < 0:
            num, c = -num, -c
        return PolyFraction._make(num, c, facs)

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PolyFraction.from_int(1, self.nvars)
        facs = {f: m * n for f, m in self.factors}
        return PolyFraction._make(self.num ** n, self.const ** n, facs, cancel=False)

    # -- equality (cross-multiplication) -----------------------------------------
    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return fraction_equal(self, other)

    def __hash__(self):
        # value-based hashing would need a canonical form; fractions are
        # compared by cross-multiplication only
        raise TypeError("PolyFraction is not hashable")

    # -- evaluation / substitution --------------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        """Value at a rational point; raises ZeroDivisionError on a pole."""
        d = Fraction(self.const)
        for f, m in self.factors:
            d *= f.evaluate(point) ** m
        if d == 0:
            raise ZeroDivisionError("evaluation point is a pole")
        return self.num.evaluate(point) / d

    def substitute(self, images: Sequence[MultiPoly]) -> "PolyFraction":
        """Apply the ring map ``v_k -> images[k]`` (polynomial images)."""
        num = self.num.substitute(images)
        facs: Dict[MultiPoly, int] = {}
        c = self.const
        for f, m in self.factors:
            img = f.substitute(images)
            if img.is_zero():
                raise ZeroDivisionError("substitution makes a denominator factor vanish")
            ci, fi = split_linear_factors(img)
            c *= ci ** m
            for h, k in fi.items():
                facs[h] = facs.get(h, 0) + k * m
        if c < 0:
            num, c = -num, -c
        return PolyFraction._make(num, c, facs)

    def __repr__(self):
        if not self.factors and self.const == 1:
            return f"PolyFraction({self.num.to_string()})"
        den = [str(self.const)] if self.const != 1 else []
        den += [f"({f.to_string()})" + (f"^{m}" if m > 1 else "") for f, m in self.factors]
        return f"PolyFraction(({self.num.to_string()}) / {'*'.join(den)})"


def _sorted_factors(factors) -> Tuple[Tuple[MultiPoly, int], ...]:
    items = factors.items() if isinstance(factors, Mapping) else factors
    return tuple(sorted(((f, m) for f, m in items if m), key=lambda t: t[0].sort_key()))


def fraction_equal(a: PolyFraction, b: PolyFraction) -> bool:
    """Decide ``a == b`` by comparing ``a.num * b.den`` with ``b.num * a.den``."""
    if a.nvars != b.nvars:
        raise ValueError("variable-count mismatch")
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    if a.const == b.const and a.factors == b.factors:
        return a.num == b.num
    return a.num * b.den == b.num * a.den
