"""Fourier expansions of Siegel modular forms and concrete producers.

An expansion is ``sum_T a_T prod_{i<j} q_ij^{2 t_ij} prod_i q_ii^{t_ii}``.
Exponent matrices store the diagonal ``t_ii`` and, above the diagonal, the
integer ``2 t_ij`` (the actual power of ``q_ij``). Theta constants with
half-integer characteristics need exponents in ``(1/8) Z``; those live in
:class:`FracExponentExpansion`, scaled by 8, and only become a
:class:`FourierExpansion` once every denominator has cleared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra.serialize import rational_from_str, rational_to_str

HALF = Fraction(1, 2)


class FractionalExponentError(ArithmeticError):
    """A product that should have integral exponents still has fractions."""


class ResourceBudgetError(RuntimeError):
    """The requested truncation exceeds the enumeration budget."""


def _pairs(g: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(g) for j in range(i + 1, g)]


# -- exponent matrices ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ExponentMatrix:
    """Half-integral symmetric T: ``diag = (t_ii)``, ``off = (2 t_ij)`` for i < j row-major."""

    diag: Tuple[int, ...]
    off: Tuple[int, ...]

    def __post_init__(self):
        g = len(self.diag)
        if len(self.off) != g * (g - 1) // 2:
            raise ValueError("off-diagonal length does not match the degree")

    @property
    def g(self) -> int:
        return len(self.diag)

    @property
    def trace(self) -> int:
        return sum(self.diag)

    @classmethod
    def zero(cls, g: int) -> "ExponentMatrix":
        return cls((0,) * g, (0,) * (g * (g - 1) // 2))

    @classmethod
    def from_matrix(cls, T) -> "ExponentMatrix":
        g = len(T)
        diag = []
        for i in range(g):
            v = Fraction(T[i][i])
            if v.denominator != 1:
                raise ValueError("diagonal entries must be integers")
            diag.append(int(v))
        off = []
        for i, j in _pairs(g):
            a, b = Fraction(T[i][j]), Fraction(T[j][i])
            if a != b:
                raise ValueError("T must be symmetric")
            if (2 * a).denominator != 1:
                raise ValueError("off-diagonal entries must be half-integers")
            off.append(int(2 * a))
        return cls(tuple(diag), tuple(off))

    def pairs(self) -> List[Tuple[Tuple[int, int], int]]:
        """``[((i, j), 2 t_ij)]`` with 0-based ``i < j``."""
        return list(zip(_pairs(self.g), self.off))

    def entry(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(self.diag[i])
        if i > j:
            i, j = j, i
        return Fraction(self.off[_pairs(self.g).index((i, j))], 2)

    def matrix(self) -> List[List[Fraction]]:
        return [[self.entry(i, j) for j in range(self.g)] for i in range(self.g)]

    def is_psd(self) -> bool:
        """All principal minors non-negative (exact)."""
        M = self.matrix()
        g = self.g
        for r in range(1, g + 1):
            for idx in itertools.combinations(range(g), r):
                if _det([[M[a][b] for b in idx] for a in idx]) < 0:
                    return False
        return True

    def conjugate(self, perm: Sequence[int]) -> "ExponentMatrix":
        """``T -> P T P^t`` for the slot permutation ``perm`` (new slot k = old slot perm[k])."""
        M = self.matrix()
        return ExponentMatrix.from_matrix([[M[perm[a]][perm[b]] for b in range(self.g)] for a in range(self.g)])

    def to_json(self):
        return [[rational_to_str(v) for v in row] for row in self.matrix()]

    @classmethod
    def from_json(cls, rows) -> "ExponentMatrix":
        return cls.from_matrix([[rational_from_str(v) for v in row] for row in rows])


def _det(M: List[List[Fraction]]) -> Fraction:
    n = len(M)
    A = [list(r) for r in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                for k in range(c, n):
                    A[r][k] -= f * A[c][k]
    return det


# -- integral expansions ---------------------------------------------------------------------

class FourierExpansion:
    """Finitely supported ``T -> a_T`` known for every T with trace <= max_trace."""

    __slots__ = ("g", "max_trace", "terms")

    def __init__(self, g: int, max_trace: int, terms: Optional[Dict[ExponentMatrix, object]] = None):
        self.g = g
        self.max_trace = max_trace
        clean = {}
        for T, a in (terms or {}).items():
            if T.g != g:
                raise ValueError("exponent matrix of the wrong degree")
            if T.trace > max_trace:
                continue
            a = Fraction(a)
            if a:
                clean[T] = a
        self.terms = clean

    @classmethod
    def constant(cls, g: int, c=1, max_trace: int = 0) -> "FourierExpansion":
        return cls(g, max_trace, {ExponentMatrix.zero(g): c})

    @classmethod
    def monomial(cls, T: ExponentMatrix, c=1, max_trace: Optional[int] = None) -> "FourierExpansion":
        return cls(T.g, T.trace if max_trace is None else max_trace, {T: c})

    def coefficient(self, T: ExponentMatrix) -> Fraction:
        return self.terms.get(T, Fraction(0))

    def min_trace(self) -> Optional[int]:
        return min((T.trace for T in self.terms), default=None)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (t[0].trace, t[0].diag, t[0].off))

    def truncate(self, max_trace: int) -> "FourierExpansion":
        if max_trace > self.max_trace:
            raise ValueError("cannot raise the truncation")
        return FourierExpansion(self.g, max_trace, self.terms)

    def __add__(self, other: "FourierExpansion") -> "FourierExpansion":
        self._check(other)
        out = dict(self.terms)
        for T, a in other.terms.items():
            out[T] = out.get(T, 0) + a
        return FourierExpansion(self.g, min(self.max_trace, other.max_trace), out)

    def __neg__(self):
        return FourierExpansion(self.g, self.max_trace, {T: -a for T, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FourierExpansion":
        c = Fraction(c)
        return FourierExpansion(self.g, self.max_trace, {T: a * c for T, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FourierExpansion):
            return self.scale(other)
        self._check(other)
        m = min(self.max_trace, other.max_trace)
        out: Dict[ExponentMatrix, Fraction] = {}
        for T1, a1 in self.terms.items():
            for T2, a2 in other.terms.items():
                if T1.trace + T2.trace > m:
                    continue
                T = ExponentMatrix(
                    tuple(x + y for x, y in zip(T1.diag, T2.diag)),
                    tuple(x + y for x, y in zip(T1.off, T2.off)),
                )
                out[T] = out.get(T, 0) + a1 * a2
        return FourierExpansion(self.g, m, out)

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, FourierExpansion) or other.g != self.g:
            raise ValueError("expansions of different degree")

    def __eq__(self, other):
        if not isinstance(other, FourierExpansion):
            return NotImplemented
        if other.g != self.g:
            return False
        m = min(self.max_trace, other.max_trace)
        a = {T: c for T, c in self.terms.items() if T.trace <= m}
        b = {T: c for T, c in other.terms.items() if T.trace <= m}
        return a == b

    __hash__ = None

    def all_psd(self) -> bool:
        return all(T.is_psd() for T in self.terms)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.terms.values())

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "max_trace": self.max_trace,
            "terms": [{"T": T.to_json(), "a": rational_to_str(a)} for T, a in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, d) -> "FourierExpansion":
        if isinstance(d, list):
            terms = {ExponentMatrix.from_json(t["T"]): rational_from_str(t["a"]) for t in d}
            g = next(iter(terms)).g if terms else 0
            mt = max((T.trace for T in terms), default=0)
            return cls(g, mt, terms)
        terms = {ExponentMatrix.from_json(t["T"]): rational_from_str(t["a"]) for t in d["terms"]}
        return cls(int(d["g"]), int(d["max_trace"]), terms)

    def __repr__(self):
        return f"FourierExpansion(g={self.g}, max_trace={self.max_trace}, {len(self.terms)} terms)"


def boundary_restrict(F):
    """Keep the terms with ``t_gg = 0`` (hence ``t_ig = 0``) and drop the last slot.

    Accepts integral and fractional-exponent expansions alike.
    """
    if F.g < 1:
        raise ValueError("need g >= 1")
    g = F.g
    last_pairs = [k for k, (i, j) in enumerate(_pairs(g)) if j == g - 1]
    keep_pairs = [k for k, (i, j) in enumerate(_pairs(g)) if j != g - 1]
    if isinstance(F, FracExponentExpansion):
        terms = {}
        for (d8, o8), v in F.terms.items():
            if d8[-1] == 0 and not any(o8[k] for k in last_pairs):
                terms[(d8[:-1], tuple(o8[k] for k in keep_pairs))] = v
        return FracExponentExpansion(g - 1, F.max_trace8, terms)
    out = {}
    for T, a in F.terms.items():
        if T.diag[-1] != 0:
            continue
        if any(T.off[k] for k in last_pairs):
            # impossible for positive semidefinite T
            continue
        out[ExponentMatrix(T.diag[:-1], tuple(T.off[k] for k in keep_pairs))] = a
    return FourierExpansion(g - 1, F.max_trace, out)


# -- Gaussian integers (theta signs can be +-i) ------------------------------------------------

_I_POW = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


class FracExponentExpansion:
    """Like :class:`FourierExpansion` with exponents in (1/8)Z, stored times 8.

    Keys are ``(diag8, off8)`` with ``diag8_i = 8 t_ii`` and ``off8_ij`` eight
    times the power of ``q_ij``; values are Gaussian integers ``(re, im)``.
    ``max_trace8`` bounds ``sum diag8``.
    """

    __slots__ = ("g", "max_trace8", "terms")

    def __init__(self, g: int, max_trace8: int, terms: Optional[Dict] = None):
        self.g = g
        self.max_trace8 = max_trace8
        self.terms = {k: v for k, v in (terms or {}).items() if v != (0, 0) and sum(k[0]) <= max_trace8}

    @property
    def max_trace(self) -> Fraction:
        return Fraction(self.max_trace8, 8)

    def min_trace8(self) -> Optional[int]:
        return min((sum(k[0]) for k in self.terms), default=None)

    def __mul__(self, other: "FracExponentExpansion") -> "FracExponentExpansion":
        return frac_mul(self, other, min(self.max_trace8, other.max_trace8))

    def coefficient(self, diag, off) -> Tuple[int, int]:
        d8 = tuple(int(Fraction(x) * 8) for x in diag)
        o8 = tuple(int(Fraction(x) * 8) for x in off)
        return self.terms.get((d8, o8), (0, 0))

    def to_fourier(self) -> FourierExpansion:
        """Convert, insisting that exponents and coefficients are integral."""
        out = {}
        for (d8, o8), (re, im) in self.terms.items():
            if any(x % 8 for x in d8) or any(x % 8 for x in o8):
                raise FractionalExponentError(f"fractional exponent {d8}/8, {o8}/8 survives")
            if im:
                raise FractionalExponentError("non-real coefficient survives")
            out[ExponentMatrix(tuple(x // 8 for x in d8), tuple(x // 8 for x in o8))] = re
        return FourierExpansion(self.g, self.max_trace8 // 8, out)

    def to_json(self) -> dict:
        def enc(v):
            return [rational_to_str(Fraction(v[0])), rational_to_str(Fraction(v[1]))]

        return {
            "g": self.g,
            "scale": 8,
            "max_trace8": self.max_trace8,
            "terms": [{"diag8": list(k[0]), "off8": list(k[1]), "a": enc(v)} for k, v in sorted(self.terms.items())],
        }

    def __eq__(self, other):
        if not isinstance(other, FracExponentExpansion):
            return NotImplemented
        m = min(self.max_trace8, other.max_trace8)
        a = {k: v for k, v in self.terms.items() if sum(k[0]) <= m}
        b = {k: v for k, v in other.terms.items() if sum(k[0]) <= m}
        return self.g == other.g and a == b

    __hash__ = None


def frac_mul(A: FracExponentExpansion, B: FracExponentExpansion, bound8: int) -> FracExponentExpansion:
    out: Dict = {}
    bt = [(k, sum(k[0]), v) for k, v in B.terms.items()]
    for (d1, o1), v1 in A.terms.items():
        t1 = sum(d1)
        for (d2, o2), t2, v2 in bt:
            if t1 + t2 > bound8:
                continue
            key = (tuple(x + y for x, y in zip(d1, d2)), tuple(x + y for x, y in zip(o1, o2)))
            out[key] = _gadd(out.get(key, (0, 0)), _gmul(v1, v2))
    return FracExponentExpansion(A.g, bound8, out)


# -- theta constants ------------------------------------------------------------------------------

def parse_characteristic(v: Sequence, g: int) -> Tuple[Fraction, ...]:
    out = tuple(Fraction(x) for x in v)
    if len(out) != g or any(x not in (0, HALF) for x in out):
        raise ValueError(f"characteristic entries must be 0 or 1/2, got {v!r}")
    return out


def is_even(a: Sequence, b: Sequence) -> bool:
    return int(4 * sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))) % 2 == 0


def even_characteristics(g: int) -> List[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]:
    """All even ``(a, b)`` in ``{0, 1/2}^g x {0, 1/2}^g``, in lexicographic order."""
    vals = list(itertools.product((Fraction(0), HALF), repeat=g))
    return [(a, b) for a in vals for b in vals if is_even(a, b)]


def theta_min_trace8(a: Sequence) -> int:
    """Eight times the smallest trace in a theta constant: one eighth per half entry of a."""
    return sum(1 for x in a if x)


def theta_constant(a: Sequence, b: Sequence, g: int, max_trace, require_even: bool = False) -> FracExponentExpansion:
    """``sum_n exp(2 pi i [ m Z m^t / 2 + m . b ])`` with ``m = n + a``, to trace ``max_trace``.

    The q_ii exponent is ``m_i^2 / 2`` and the q_ij exponent ``m_i m_j``;
    the sign ``exp(2 pi i m.b)`` is a power of ``i``.
    """
    a = parse_characteristic(a, g)
    b = parse_characteristic(b, g)
    if require_even and not is_even(a, b):
        raise ValueError(f"odd characteristic {a}, {b}")
    bound8 = int(Fraction(max_trace) * 8)
    # 8 * m_i^2 / 2 = 4 m_i^2 <= bound8 bounds each coordinate
    ranges = []
    for ai in a:
        lim = int((bound8 / 4) ** 0.5) + 2
        ranges.append([Fraction(n) + ai for n in range(-lim, lim + 1) if 4 * (Fraction(n) + ai) ** 2 <= bound8])
    terms: Dict = {}

    def rec(k, ms, t8):
        if k == g:
            d8 = tuple(int(4 * m * m) for m in ms)
            o8 = tuple(int(8 * ms[i] * ms[j]) for i, j in _pairs(g))
            phase = int(4 * sum(m * y for m, y in zip(ms, b))) % 4
            key = (d8, o8)
            terms[key] = _gadd(terms.get(key, (0, 0)), _I_POW[phase])
            return
        for m in ranges[k]:
            t = t8 + int(4 * m * m)
            if t <= bound8:
                rec(k + 1, ms + (m,), t)

    rec(0, (), 0)
    return FracExponentExpansion(g, bound8, terms)


def theta_product_frac(g: int, max_trace) -> FracExponentExpansion:
    """Product of all even theta constants, truncated at ``max_trace``.

    Each factor has a known minimal trace, so every factor is only expanded
    as far as the overall budget allows, and partial products are cut at the
    bound minus the minimal trace still to come.
    """
    if g < 1:
        raise ValueError("need g >= 1")
    chars = even_characteristics(g)
    bound8 = int(Fraction(max_trace) * 8)
    mins = [theta_min_trace8(a) for a, _ in chars]
    total_min = sum(mins)
    if bound8 < total_min:
        return FracExponentExpansion(g, bound8, {})
    budget = bound8 - total_min
    remaining = total_min
    acc = None
    for (a, b), mu in zip(chars, mins):
        f = theta_constant(a, b, g, Fraction(mu + budget, 8))
        remaining -= mu
        if acc is None:
            acc = FracExponentExpansion(g, bound8 - remaining, f.terms)
        else:
            acc = frac_mul(acc, f, bound8 - remaining)
    return FracExponentExpansion(g, bound8, acc.terms)


def theta_product(g: int, max_trace: int) -> FourierExpansion:
    """The even-theta product as an integral expansion.

    Raises :class:`FractionalExponentError` when exponents do not clear,
    which is the case for g = 2 (diagonal exponents stay half-integral).
    """
    if g < 2:
        raise ValueError("need g >= 2")
    return theta_product_frac(g, max_trace).to_fourier()


def theta_weight(g: int) -> Fraction:
    return Fraction(len(even_characteristics(g)), 2)


def even_char_sign(g: int) -> int:
    """``prod (-1)^{sum b_i}`` over ``b in {0, 1/2}^g`` with integral ``sum b_i``."""
    if g < 1:
        raise ValueError("need g >= 1")
    sign = 1
    for b in itertools.product((0, 1), repeat=g):
        halves = sum(b)
        if halves % 2 == 0 and (halves // 2) % 2 == 1:
            sign = -sign
    return sign


# -- lattices ---------------------------------------------------------------------------------------

class HalfIntLattice:
    """``L_2n = {x : 2x_i, x_i - x_j, (1/2) sum x_i all integral}``.

    Vectors are handled in doubled coordinates ``y = 2x``: all ``y_i`` share a
    parity and ``sum y_i = 0 mod 4``; ``<x, x'> = y.y' / 4``.
    """

    def __init__(self, dim: int):
        if dim < 2 or dim % 8:
            raise ValueError("this implementation needs dimension divisible by 8 (even unimodular case)")
        self.dim = dim
        self._cache: Dict[int, np.ndarray] = {}

    def contains(self, x: Sequence) -> bool:
        x = [Fraction(v) for v in x]
        if len(x) != self.dim:
            return False
        if any((2 * v).denominator != 1 for v in x):
            return False
        if any((v - x[0]).denominator != 1 for v in x):
            return False
        return (sum(x) / 2).denominator == 1

    def vectors(self, max_norm: int) -> np.ndarray:
        """Doubled coordinates of all vectors with ``<x, x> <= max_norm``."""
        if max_norm not in self._cache:
            self._cache[max_norm] = _enumerate_half_int(self.dim, 4 * max_norm)
        return self._cache[max_norm]

    def __repr__(self):
        return f"L_{self.dim}"


class DirectSumLattice:
    """Orthogonal direct sum of lattices that expose ``vectors(max_norm)``."""

    def __init__(self, parts: Sequence):
        self.parts = list(parts)
        self.dim = sum(p.dim for p in self.parts)
        self._cache: Dict[int, np.ndarray] = {}

    def vectors(self, max_norm: int) -> np.ndarray:
        if max_norm in self._cache:
            return self._cache[max_norm]
        acc = np.zeros((1, 0), dtype=np.int16)
        acc_norm = np.zeros(1, dtype=np.int64)
        for p in self.parts:
            v = p.vectors(max_norm).astype(np.int16)
            vn = (v.astype(np.int64) ** 2).sum(axis=1)
            blocks = []
            norms = []
            for n in np.unique(vn):
                ok = acc_norm + n <= 4 * max_norm
                if not np.any(ok):
                    continue
                sel = v[vn == n]
                left = acc[ok]
                blocks.append(np.concatenate([np.repeat(left, len(sel), axis=0), np.tile(sel, (len(left), 1))], axis=1))
                norms.append(np.repeat(acc_norm[ok], len(sel)) + n)
            acc = np.concatenate(blocks)
            acc_norm = np.concatenate(norms)
        self._cache[max_norm] = acc
        return acc

    def __repr__(self):
        return " + ".join(repr(p) for p in self.parts)


def _enumerate_half_int(dim: int, max_sq: int) -> np.ndarray:
    """Integer vectors y with common parity, ``sum y = 0 mod 4`` and ``|y|^2 <= max_sq``."""
    out = []
    for parity in (0, 1):
        lim = int(max_sq ** 0.5)
        vals = np.array([v for v in range(-lim, lim + 1) if v % 2 == parity], dtype=np.int64)
        floor = parity  # every remaining odd coordinate adds at least 1
        rows = np.zeros((1, 0), dtype=np.int8)
        sq = np.zeros(1, dtype=np.int64)
        for k in range(dim):
            rest = (dim - k - 1) * floor
            new_sq = sq[:, None] + vals[None, :] ** 2
            ok = new_sq + rest <= max_sq
            ri, vi = np.nonzero(ok)
            rows = np.concatenate([rows[ri], vals[vi].astype(np.int8).reshape(-1, 1)], axis=1)
            sq = new_sq[ri, vi]
        keep = rows.astype(np.int64).sum(axis=1) % 4 == 0
        out.append(rows[keep])
    return np.concatenate(out)


def shells(L, max_norm: int) -> Dict[int, np.ndarray]:
    """``{norm: doubled vectors}`` for even norms ``0..max_norm``."""
    v = L.vectors(max_norm).astype(np.int64)
    n4 = (v * v).sum(axis=1)
    if np.any(n4 % 4):
        raise ValueError("lattice is not integral")
    norms = n4 // 4
    return {int(n): v[norms == n] for n in np.unique(norms)}


def lattice_theta(L, g: int, max_trace: int, budget: float = 5e8) -> FourierExpansion:
    """Degree-g theta series ``sum over g-tuples of exp(pi i sum <l_i, l_j> z_ij)``.

    The coefficient of T counts tuples with ``<l_i, l_i> = 2 t_ii`` and
    ``<l_i, l_j> = 2 t_ij``. Tuples are assembled per diagonal: zero slots
    contribute the zero vector, one nonzero slot a shell count, two slots a
    histogram of the pairwise Gram matrix; more slots recurse over the first.
    """
    if g < 1 or max_trace < 0:
        raise ValueError("need g >= 1 and max_trace >= 0")
    sh = shells(L, 2 * max_trace)
    terms: Dict[ExponentMatrix, int] = {}
    pair_index = {p: k for k, p in enumerate(_pairs(g))}
    for diag in _diagonals(g, max_trace):
        slots = [i for i in range(g) if diag[i]]
        vecs = [sh.get(2 * diag[i]) for i in slots]
        if any(v is None for v in vecs):
            continue
        work = float(np.prod([len(v) for v in vecs])) if vecs else 1.0
        if work > budget:
            raise ResourceBudgetError(f"diagonal {diag} needs {work:.3g} tuples (budget {budget:.3g})")
        for grams, count in _gram_histogram(vecs).items():
            if not count:
                continue
            off = [0] * len(pair_index)
            for (x, y), ip in grams:
                off[pair_index[(slots[x], slots[y])]] = ip
            T = ExponentMatrix(tuple(diag), tuple(off))
            terms[T] = terms.get(T, 0) + count
    return FourierExpansion(g, max_trace, terms)


def _diagonals(g: int, max_trace: int):
    for diag in itertools.product(range(max_trace + 1), repeat=g):
        if sum(diag) <= max_trace:
            yield diag


def _gram_histogram(vecs: List[np.ndarray]) -> Dict[frozenset, int]:
    """Histogram of off-diagonal Gram entries over tuples (one vector per slot)."""
    k = len(vecs)
    if k == 0:
        return {_freeze({}): 1}
    if k == 1:
        return {_freeze({}): len(vecs[0])}
    if k == 2:
        out: Dict = {}
        A, B = vecs
        for start in range(0, len(A), 4096):
            ip = (A[start:start + 4096] @ B.T) // 4
            vals, counts = np.unique(ip, return_counts=True)
            for v, c in zip(vals, counts):
                key = _freeze({(0, 1): int(v)})
                out[key] = out.get(key, 0) + int(c)
        return out
    out = {}
    first, rest = vecs[0], vecs[1:]
    for u in first:
        ips = [(r @ u) // 4 for r in rest]
        # group the remaining slots' vectors by their inner product with u
        sub = _gram_histogram_conditioned(rest, ips)
        for key, c in sub.items():
            out[key] = out.get(key, 0) + c
    return out


def _gram_histogram_conditioned(rest, ips) -> Dict:
    out: Dict = {}
    for combo in itertools.product(*[np.unique(ip) for ip in ips]):
        parts = [r[ip == v] for r, ip, v in zip(rest, ips, combo)]
        inner = _gram_histogram(parts)
        for key, c in inner.items():
            d = {(x + 1, y + 1): v for (x, y), v in dict(key).items()}
            for s, v in enumerate(combo):
                d[(0, s + 1)] = int(v)
            kk = _freeze(d)
            out[kk] = out.get(kk, 0) + c
    return out


def _freeze(d: Dict) -> frozenset:
    return frozenset(d.items())


def degree_one_series(L, max_trace: int) -> List[int]:
    """Shell counts ``#{<x, x> = 2n}`` for n = 0..max_trace."""
    sh = shells(L, 2 * max_trace)
    return [len(sh.get(2 * n, ())) for n in range(max_trace + 1)]


def e8() -> HalfIntLattice:
    return HalfIntLattice(8)


def schottky_J(max_trace: int = 2, allow_large: bool = False) -> FourierExpansion:
    """``(4/315)(phi_4^2 - phi_8)`` in degree 4.

    ``phi_4^2`` is the degree-4 theta series of ``L_8 + L_8`` (product of
    theta series is the theta series of the direct sum) and ``phi_8`` that of
    ``L_16``.
    """
    if max_trace > 2 and not allow_large:
        raise ResourceBudgetError("schottky_J is limited to max_trace <= 2 (pass allow_large to override)")
    phi4sq = lattice_theta(DirectSumLattice([HalfIntLattice(8), HalfIntLattice(8)]), 4, max_trace)
    phi8 = lattice_theta(HalfIntLattice(16), 4, max_trace)
    return (phi4sq - phi8).scale(Fraction(4, 315))
