"""Truncated Laurent series in q with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence


class QSeries:
    """``sum_{n=min_exponent}^{max_exponent} c_n q^n`` known through ``q^max_exponent``.

    Coefficients are stored densely from ``min_exponent``. Explicit zeros at
    either end are allowed; equality ignores them.
    """

    __slots__ = ("min_exponent", "coefficients")

    def __init__(self, min_exponent: int, coefficients: Sequence):
        if not coefficients:
            raise ValueError("a QSeries needs at least one coefficient slot")
        self.min_exponent = int(min_exponent)
        self.coefficients: List[Fraction] = [Fraction(c) for c in coefficients]

    @property
    def max_exponent(self) -> int:
        return self.min_exponent + len(self.coefficients) - 1

    @classmethod
    def from_dict(cls, terms: Dict[int, object], max_exponent: int) -> "QSeries":
        lo = min([n for n, c in terms.items() if c] + [max_exponent])
        coeffs = [Fraction(terms.get(n, 0)) for n in range(lo, max_exponent + 1)]
        return cls(lo, coeffs)

    @classmethod
    def monomial(cls, n: int, max_exponent: int, c=1) -> "QSeries":
        if max_exponent < n:
            raise ValueError("max_exponent below the monomial")
        return cls(n, [c] + [0] * (max_exponent - n))

    @classmethod
    def one(cls, max_exponent: int) -> "QSeries":
        return cls.monomial(0, max_exponent)

    def __getitem__(self, n: int) -> Fraction:
        if n > self.max_exponent:
            raise IndexError(f"q^{n} is beyond the known precision q^{self.max_exponent}")
        k = n - self.min_exponent
        return self.coefficients[k] if k >= 0 else Fraction(0)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coefficients):
            if c:
                return self.min_exponent + k
        return None

    def normalized(self) -> "QSeries":
        """Drop leading explicit zeros (keeps the precision)."""
        v = self.valuation()
        if v is None or v == self.min_exponent:
            return self
        return QSeries(v, self.coefficients[v - self.min_exponent:])

    def truncate(self, max_exponent: int) -> "QSeries":
        if max_exponent > self.max_exponent:
            raise ValueError("cannot raise the precision")
        if max_exponent < self.min_exponent:
            return QSeries(max_exponent, [0])
        return QSeries(self.min_exponent, self.coefficients[: max_exponent - self.min_exponent + 1])

    def items(self):
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        return [(self.min_exponent + k, c) for k, c in enumerate(self.coefficients) if c]

    # -- arithmetic ---------------------------------------------------------
    def _lift(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries.monomial(0, max(self.max_exponent, 0), other)
        raise TypeError(f"cannot combine QSeries with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        hi = min(self.max_exponent, other.max_exponent)
        lo = min(self.min_exponent, other.min_exponent, hi)
        coeffs = [Fraction(0)] * (hi - lo + 1)
        for s in (self, other):
            for k, c in enumerate(s.coefficients):
                n = s.min_exponent + k
                if n <= hi:
                    coeffs[n - lo] += c
        return QSeries(lo, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.min_exponent, [-c for c in self.coefficients])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(self.min_exponent, [c * other for c in self.coefficients])
        return qseries_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return qseries_pow(self, n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(self.min_exponent, [c / other for c in self.coefficients])
        return qseries_mul(self, qseries_inverse(other))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.monomial(0, max(self.max_exponent, 0), other)
        if not isinstance(other, QSeries):
            return NotImplemented
        hi = min(self.max_exponent, other.max_exponent)
        lo = min(self.min_exponent, other.min_exponent)
        return all(self[n] == other[n] for n in range(lo, hi + 1))

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{c}*q^{n}" for n, c in self.items()) or "0"
        return f"QSeries({body} + O(q^{self.max_exponent + 1}))"


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    """Product; known through ``min(a.min + b.max, b.min + a.max)``."""
    a, b = a.normalized(), b.normalized()
    lo = a.min_exponent + b.min_exponent
    hi = min(a.min_exponent + b.max_exponent, b.min_exponent + a.max_exponent)
    n = hi - lo + 1
    if n <= 0:
        return QSeries(hi, [0])
    out = [Fraction(0)] * n
    ac, bc = a.coefficients, b.coefficients
    for i in range(min(len(ac), n)):
        ci = ac[i]
        if not ci:
            continue
        for j in range(min(len(bc), n - i)):
            out[i + j] += ci * bc[j]
    return QSeries(lo, out)


def qseries_inverse(a: QSeries) -> QSeries:
    """Inverse of a nonzero series; relative precision is preserved."""
    a = a.normalized()
    v = a.valuation()
    if v is None:
        raise ZeroDivisionError("inverse of the zero series")
    c = a.coefficients
    n = len(c)
    inv0 = 1 / c[0]
    out = [inv0]
    for k in range(1, n):
        acc = sum((c[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
        out.append(-acc * inv0)
    return QSeries(-v, out)


def qseries_pow(a: QSeries, n: int) -> QSeries:
    if n < 0:
        return qseries_pow(qseries_inverse(a), -n)
    if n == 0:
        return QSeries.one(max(a.max_exponent - a.normalized().min_exponent, 0))
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else qseries_mul(result, base)
        n >>= 1
        if n:
            base = qseries_mul(base, base)
    return result


def qseries_product(factors: Iterable[QSeries]) -> QSeries:
    it = iter(factors)
    acc = next(it)
    for f in it:
        acc = qseries_mul(acc, f)
    return acc
