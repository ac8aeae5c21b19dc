"""Truncated multivariate power series in y_1..y_g over an exact coefficient ring.

Truncation is by total y-degree: a series of degree ``D`` knows every
coefficient of total degree ``<= D`` (the filtration by powers of the ideal
generated by the y's).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .fraction import PolyFraction
from .poly import MultiPoly

Exponent = Tuple[int, ...]

SYMBOLIC = "symbolic"
EVALUATED = "evaluated"


class RationalField:
    """Exact rationals; coefficient ring of evaluated mode."""

    mode = EVALUATED

    def one(self):
        return Fraction(1)

    def zero(self):
        return Fraction(0)

    def coerce(self, x):
        if isinstance(x, PolyFraction):
            raise TypeError("symbolic coefficient in an evaluated series")
        return Fraction(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class FractionField:
    """Fractions of integer polynomials in ``nvars`` variables (symbolic mode)."""

    mode = SYMBOLIC

    def __init__(self, nvars: int):
        self.nvars = nvars

    def one(self):
        return PolyFraction.from_int(1, self.nvars)

    def zero(self):
        return PolyFraction.from_int(0, self.nvars)

    def gen(self, k: int) -> PolyFraction:
        return PolyFraction.variable(k, self.nvars)

    def coerce(self, x):
        if isinstance(x, PolyFraction):
            if x.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return x
        if isinstance(x, MultiPoly):
            return PolyFraction(x)
        return PolyFraction.from_rational(x, self.nvars)

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.nvars == self.nvars

    def __hash__(self):
        return hash(("Frac", self.nvars))

    def __repr__(self):
        return f"Frac(Z[{self.nvars} vars])"


QQ = RationalField()


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> Tuple[Exponent, ...]:
    """All exponent vectors of total degree <= ``degree``, graded then lex-descending."""
    out: List[Exponent] = []
    for d in range(degree + 1):
        layer = []
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for k in combo:
                e[k] += 1
            layer.append(tuple(e))
        layer.sort(reverse=True)
        out.extend(layer)
    return tuple(out)


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class MultiSeries:
    """Immutable truncated series ``sum c_e y^e`` with ``|e| <= degree``."""

    __slots__ = ("nvars", "degree", "ring", "terms")

    def __init__(self, nvars: int, degree: int, ring, terms: Mapping[Exponent, object] | None = None):
        if degree < 0:
            raise ValueError("truncation degree must be non-negative")
        self.nvars = nvars
        self.degree = degree
        self.ring = ring
        clean: Dict[Exponent, object] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError("exponent length does not match variable count")
            if sum(e) > degree:
                continue
            c = ring.coerce(c)
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, degree, ring, terms):
        s = object.__new__(cls)
        s.nvars = nvars
        s.degree = degree
        s.ring = ring
        s.terms = terms
        return s

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int, degree: int, ring) -> "MultiSeries":
        return cls(nvars, degree, ring, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int, degree: int, ring) -> "MultiSeries":
        return cls.constant(ring.one(), nvars, degree, ring)

    @classmethod
    def gen(cls, k: int, nvars: int, degree: int, ring) -> "MultiSeries":
        """The variable ``y_{k+1}`` (0-based ``k``)."""
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, degree, ring, {tuple(e): ring.one()})

    @property
    def mode(self) -> str:
        return self.ring.mode

    # -- access -----------------------------------------------------------
    def coefficient(self, e: Sequence[int]):
        e = tuple(e)
        if sum(e) > self.degree:
            raise ValueError("coefficient beyond the truncation degree")
        return self.terms.get(e, self.ring.zero())

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def valuation(self) -> int:
        """Lowest total degree present (``degree + 1`` for the zero series)."""
        return min((sum(e) for e in self.terms), default=self.degree + 1)

    def is_zero(self) -> bool:
        return not self.terms

    def homogeneous_part(self, d: int) -> Dict[Exponent, object]:
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def sorted_terms(self):
        order = {e: i for i, e in enumerate(monomials(self.nvars, self.degree))}
        return sorted(self.terms.items(), key=lambda t: order[t[0]])

    # -- ring operations ----------------------------------------------------
    def _check(self, other: "MultiSeries"):
        if not isinstance(other, MultiSeries):
            raise TypeError("expected a MultiSeries")
        if other.nvars != self.nvars:
            raise ValueError("variable-count mismatch")
        if other.ring != self.ring:
            raise ValueError("coefficient-ring mismatch (symbolic vs evaluated)")

    def _lift(self, other) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            self._check(other)
            return other
        return MultiSeries.constant(other, self.nvars, self.degree, self.ring)

    def __add__(self, other):
        other = self._lift(other)
        d = min(self.degree, other.degree)
        out = {e: c for e, c in self.terms.items() if sum(e) <= d}
        for e, c in other.terms.items():
            if sum(e) > d:
                continue
            if e in out:
                v = out[e] + c
                if v:
                    out[e] = v
                else:
                    del out[e]
            else:
                out[e] = c
        return MultiSeries._raw(self.nvars, d, self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries._raw(self.nvars, self.degree, self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiSeries":
        c = self.ring.coerce(c)
        if not c:
            return MultiSeries._raw(self.nvars, self.degree, self.ring, {})
        return MultiSeries._raw(self.nvars, self.degree, self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return series_inverse(self) ** (-n)
        result = MultiSeries.one(self.nvars, self.degree, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "MultiSeries":
        return series_inverse(self)

    def __truediv__(self, other):
        if isinstance(other, MultiSeries):
            return self * series_inverse(other)
        return self.scale(1 / self.ring.coerce(other))

    def truncate(self, degree: int) -> "MultiSeries":
        if degree > self.degree:
            raise ValueError("cannot raise the truncation degree")
        return MultiSeries._raw(
            self.nvars, degree, self.ring, {e: c for e, c in self.terms.items() if sum(e) <= degree}
        )

    def shift(self, e: Sequence[int], degree: int | None = None) -> "MultiSeries":
        """Multiply by the monomial ``y^e``; the result knows degree ``self.degree + |e|``."""
        e = tuple(e)
        d = self.degree + sum(e) if degree is None else degree
        out = {}
        for k, c in self.terms.items():
            ne = _add_exp(k, e)
            if sum(ne) <= d:
                out[ne] = c
        return MultiSeries._raw(self.nvars, d, self.ring, out)

    def divide_monomial(self, e: Sequence[int]) -> "MultiSeries":
        """Exact division by ``y^e``; the result knows degree ``self.degree - |e|``."""
        e = tuple(e)
        d = self.degree - sum(e)
        if d < 0:
            raise ValueError("monomial degree exceeds the truncation degree")
        out = {}
        for k, c in self.terms.items():
            ne = tuple(x - y for x, y in zip(k, e))
            if min(ne) < 0:
                raise ArithmeticError("series is not divisible by the monomial")
            out[ne] = c
        return MultiSeries._raw(self.nvars, d, self.ring, out)

    def map_coefficients(self, fn: Callable, ring) -> "MultiSeries":
        return MultiSeries(self.nvars, self.degree, ring, {e: fn(c) for e, c in self.terms.items()})

    def evaluate_coefficients(self, point: Sequence) -> "MultiSeries":
        """Symbolic -> evaluated: substitute rational values for the x-variables."""
        if self.mode != SYMBOLIC:
            raise ValueError("series is already in evaluated mode")
        return self.map_coefficients(lambda c: c.evaluate(point), QQ)

    def evaluate_y(self, ys: Sequence) -> object:
        """Sum of the truncated series at numeric/rational y-values."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for y, k in zip(ys, e):
                if k:
                    t = t * y ** k
            total = total + t
        return total

    # -- comparison -----------------------------------------------------------
    def equals(self, other: "MultiSeries") -> bool:
        """Coefficientwise equality up to the common truncation degree."""
        self._check(other)
        d = min(self.degree, other.degree)
        keys = {e for e in self.terms if sum(e) <= d} | {e for e in other.terms if sum(e) <= d}
        zero = self.ring.zero()
        return all(self.terms.get(e, zero) == other.terms.get(e, zero) for e in keys)

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            if isinstance(other, (int, Fraction, PolyFraction)):
                return self.equals(self._lift(other))
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})*y^{e}" for e, c in self.sorted_terms()) or "0"
        return f"MultiSeries[{self.mode}, D={self.degree}]({body})"


def series_mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Truncated product; the result has degree ``min(a.degree, b.degree)``."""
    a._check(b)
    d = min(a.degree, b.degree)
    out: Dict[Exponent, object] = {}
    bt = [(e, sum(e), c) for e, c in b.terms.items() if sum(e) <= d]
    for e1, c1 in a.terms.items():
        d1 = sum(e1)
        if d1 > d:
            continue
        for e2, d2, c2 in bt:
            if d1 + d2 > d:
                continue
            e = _add_exp(e1, e2)
            v = c1 * c2
            if e in out:
                out[e] = out[e] + v
            else:
                out[e] = v
    return MultiSeries._raw(a.nvars, d, a.ring, {e: c for e, c in out.items() if c})


def series_inverse(a: MultiSeries) -> MultiSeries:
    """Inverse of a series whose constant term is a unit of the coefficient ring."""
    c0 = a.constant_term()
    if not c0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = 1 / c0
    nvars, d = a.nvars, a.degree
    rest = [(e, c) for e, c in a.terms.items() if any(e)]
    out: Dict[Exponent, object] = {(0,) * nvars: inv0}
    for m in monomials(nvars, d)[1:]:
        acc = None
        for e, c in rest:
            diff = tuple(x - y for x, y in zip(m, e))
            if min(diff) < 0:
                continue
            bv = out.get(diff)
            if bv is None:
                continue
            t = c * bv
            acc = t if acc is None else acc + t
        if acc is not None and acc:
            v = -(acc * inv0)
            if v:
                out[m] = v
    return MultiSeries._raw(nvars, d, a.ring, out)


def series_product(factors: Iterable[MultiSeries]) -> MultiSeries:
    """Left-to-right product (the documented, deterministic reduction order)."""
    it = iter(factors)
    acc = next(it)
    for f in it:
        acc = acc * f
    return acc
