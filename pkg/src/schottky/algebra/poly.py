"""Sparse multivariate polynomials with arbitrary-precision integer coefficients.

Terms are stored as ``{exponent tuple: int}``. The monomial order is graded
lexicographic with variable 0 largest; for the Schottky rings the variables are
laid out as ``x_1, ..., x_g, x_{-1}, ..., x_{-g}`` (see :func:`x_index`).
"""

from __future__ import annotations

import random
from math import gcd
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

Exponent = Tuple[int, ...]

# modulus for the cheap divisibility pre-test
_PRIME = (1 << 61) - 1
# products of two residues stay inside int64
_NP_PRIME = (1 << 31) - 1
_rng = random.Random(20240611)


def x_index(k: int, g: int) -> int:
    """Position of the symbol x_k (k = +-1..+-g) in the variable layout."""
    if k == 0 or abs(k) > g:
        raise ValueError(f"signed index {k} out of range for g={g}")
    return k - 1 if k > 0 else g - k - 1


def x_names(g: int) -> Tuple[str, ...]:
    return tuple(f"x{k}" for k in range(1, g + 1)) + tuple(f"x-{k}" for k in range(1, g + 1))


def grlex_key(e: Exponent):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial over the integers in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "_hash", "_arr")

    def __init__(self, nvars: int, terms: Mapping[Exponent, int] | None = None):
        self.nvars = nvars
        if terms:
            clean = {}
            for e, c in terms.items():
                if c:
                    if len(e) != nvars:
                        raise ValueError("exponent length does not match variable count")
                    clean[tuple(e)] = int(c)
            self.terms: Dict[Exponent, int] = clean
        else:
            self.terms = {}
        self._hash = None
        self._arr = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, int]) -> "MultiPoly":
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        p._arr = None
        return p

    @classmethod
    def constant(cls, c: int, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {(0,) * nvars: int(c)} if c else {})

    @classmethod
    def variable(cls, k: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[k] = 1
        return cls._raw(nvars, {tuple(e): 1})

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self) -> Tuple[Exponent, int]:
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def content(self) -> int:
        c = 0
        for v in self.terms.values():
            c = gcd(c, v)
            if c == 1:
                break
        return c

    def sorted_terms(self):
        """Terms in descending graded-lex order (the serialization order)."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")

    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(other, self.nvars)
        elif not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(other, self.nvars)
        elif not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return MultiPoly._raw(self.nvars, {})
            return MultiPoly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out: Dict[Exponent, int] = {}
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        for e1, c1 in b.items():
            for e2, c2 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale_div(self, c: int) -> "MultiPoly":
        """Divide every coefficient by ``c``; the division must be exact."""
        out = {}
        for e, v in self.terms.items():
            q, r = divmod(v, c)
            if r:
                raise ArithmeticError("inexact coefficient division")
            out[e] = q
        return MultiPoly._raw(self.nvars, out)

    def exact_div(self, other: "MultiPoly") -> "MultiPoly | None":
        """Quotient ``self / other`` if it is a polynomial, else ``None``."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        le, lc = other.leading()
        rem = dict(self.terms)
        quot: Dict[Exponent, int] = {}
        oterms = list(other.terms.items())
        while rem:
            e = max(rem, key=grlex_key)
            c = rem[e]
            d = tuple(x - y for x, y in zip(e, le))
            if min(d) < 0:
                return None
            q, r = divmod(c, lc)
            if r:
                return None
            quot[d] = q
            for oe, oc in oterms:
                te = tuple(x + y for x, y in zip(d, oe))
                v = rem.get(te, 0) - q * oc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return MultiPoly._raw(self.nvars, quot)

    # -- evaluation / substitution -----------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def evaluate_mod(self, point: Sequence[int], p: int = _PRIME) -> int:
        pows = [[1, x % p] for x in point]
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in enumerate(e):
                if k:
                    tab = pows[v]
                    while len(tab) <= k:
                        tab.append(tab[-1] * tab[1] % p)
                    t = t * tab[k] % p
            total += t
        return total % p

    def evaluate_mod_fast(self, point: Sequence[int]) -> int:
        """``evaluate_mod`` for the fixed 31-bit prime, vectorized over terms."""
        if self._arr is None:
            items = list(self.terms.items())
            E = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
            C = np.array([c % _NP_PRIME for _, c in items], dtype=np.int64)
            self._arr = (E, C)
        E, C = self._arr
        vals = C.copy()
        for v in range(self.nvars):
            col = E[:, v]
            top = int(col.max()) if len(col) else 0
            if not top:
                continue
            tab = np.empty(top + 1, dtype=np.int64)
            tab[0] = 1
            x = point[v] % _NP_PRIME
            for k in range(1, top + 1):
                tab[k] = int(tab[k - 1]) * x % _NP_PRIME
            vals = vals * tab[col] % _NP_PRIME
        return int(vals.sum() % _NP_PRIME)

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Ring map sending variable k to ``images[k]`` (all in one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        n = images[0].nvars
        out = MultiPoly.constant(0, n)
        cache: Dict[Tuple[int, int], MultiPoly] = {}
        for e, c in self.terms.items():
            t = MultiPoly.constant(c, n)
            for k, a in enumerate(e):
                if a:
                    key = (k, a)
                    if key not in cache:
                        cache[key] = images[k] ** a
                    t = t * cache[key]
            out = out + t
        return out

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sort_key(self):
        return tuple((grlex_key(e), c) for e, c in self.sorted_terms())

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"v{k}" for k in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self.to_string()})"


def linear_candidates(nvars: int) -> Tuple[MultiPoly, ...]:
    """Normalized linear forms tried when splitting denominators.

    ``v_a``, ``v_a - v_b``, ``v_a + v_b`` and ``v_a - 1``, ``v_a + 1``: every
    denominator produced by the period and Tate computations is a product of
    these.
    """
    return _candidates(nvars)


_CAND_CACHE: Dict[int, Tuple[MultiPoly, ...]] = {}


def _candidates(nvars: int) -> Tuple[MultiPoly, ...]:
    if nvars in _CAND_CACHE:
        return _CAND_CACHE[nvars]
    zero = (0,) * nvars
    out = []

    def unit(a):
        e = [0] * nvars
        e[a] = 1
        return tuple(e)

    for a in range(nvars):
        out.append(MultiPoly._raw(nvars, {unit(a): 1}))
    for a in range(nvars):
        for b in range(a + 1, nvars):
            out.append(MultiPoly._raw(nvars, {unit(a): 1, unit(b): -1}))
            out.append(MultiPoly._raw(nvars, {unit(a): 1, unit(b): 1}))
    for a in range(nvars):
        out.append(MultiPoly._raw(nvars, {unit(a): 1, zero: -1}))
        out.append(MultiPoly._raw(nvars, {unit(a): 1, zero: 1}))
    _CAND_CACHE[nvars] = tuple(out)
    return _CAND_CACHE[nvars]


def maybe_divisible(p: MultiPoly, f: MultiPoly) -> bool:
    """Cheap necessary condition for ``f | p`` when ``f`` is linear.

    Samples two random points of the hyperplane ``f = 0`` modulo a large
    prime; a nonzero value of ``p`` there rules divisibility out. Returns
    ``True`` (inconclusive) for nonlinear ``f``.
    """
    if f.total_degree() != 1:
        return True
    n = f.nvars
    pivot = None
    for e, c in f.terms.items():
        if sum(e) == 1 and c in (1, -1):
            pivot = (e.index(1), c)
            break
    if pivot is None:
        return True
    k, c = pivot
    for _ in range(2):
        pt = [_rng.randrange(1, _NP_PRIME) for _ in range(n)]
        pt[k] = 0
        rest = f.evaluate_mod(pt, _NP_PRIME)
        # c * x_k + rest = 0
        pt[k] = (-rest * c) % _NP_PRIME
        if p.evaluate_mod_fast(pt):
            return False
    return True


def primitive_normal(p: MultiPoly) -> Tuple[int, MultiPoly]:
    """Split ``p = c * q`` with ``q`` primitive and positive leading coefficient."""
    c = p.content()
    if p.leading()[1] < 0:
        c = -c
    return c, p.scale_div(c)


def split_linear_factors(p: MultiPoly) -> Tuple[int, Dict[MultiPoly, int]]:
    """Write ``p = c * prod f^m`` peeling off the :func:`linear_candidates`.

    Whatever does not split is kept as one (normalized) factor. The result is
    a valid factorization, not necessarily into irreducibles.
    """
    if p.is_zero():
        raise ZeroDivisionError("cannot factor the zero polynomial")
    c, q = primitive_normal(p)
    factors: Dict[MultiPoly, int] = {}
    if q.is_constant():
        return c, factors
    for f in _candidates(p.nvars):
        if q.total_degree() < 1:
            break
        fe = next(iter(e for e in f.terms if sum(e) == 1))
        k = fe.index(1)
        if not any(e[k] for e in q.terms):
            continue
        while q.total_degree() >= 1 and maybe_divisible(q, f):
            r = q.exact_div(f)
            if r is None:
                break
            q = r
            factors[f] = factors.get(f, 0) + 1
    if not q.is_constant():
        c2, q = primitive_normal(q)
        c *= c2
        factors[q] = factors.get(q, 0) + 1
    else:
        c *= q.constant_value()
    return c, factors


def from_string_terms(nvars: int, terms: Iterable) -> MultiPoly:
    return MultiPoly(nvars, {tuple(e): int(c) for e, c in terms})
