"""Universal periods: multiplicative periods as formal power series.

For the one-vertex graph with g loops, the generators act on power series
in ``y_1..y_g`` whose coefficients are functions of the symbols
``x_{+-1}..x_{+-g}``:

    phi_i(alpha) = (x_i - r x_{-i}) / (1 - r),   r = y_|i| (alpha - x_i) / (alpha - x_{-i})

The same formula serves negative ``i``: ``phi_{-i}`` swaps the roles of
``x_i`` and ``x_{-i}`` and keeps ``y_|i|``, which is exactly the inverse map.

Coefficients live either in the fraction field of Z[x] (symbolic mode) or
in Q after fixing rational values for the x-symbols (evaluated mode). The
x-symbols are ordered ``x_1..x_g, x_-1..x_-g`` and an evaluation point is a
list of 2g rationals in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    EVALUATED,
    QQ,
    SYMBOLIC,
    FractionField,
    MultiPoly,
    MultiSeries,
    x_index,
)
from .algebra.serialize import rational_from_str, rational_to_str, series_from_json, series_to_json
from .moebius import cross_ratio
from .words import alphabet


class UnitError(ArithmeticError):
    """A denominator that should be a unit has zero constant term."""


class TruncationError(ValueError):
    """The period table is not known to a high enough degree."""


# -- coefficient contexts -------------------------------------------------------

@dataclass
class Context:
    """Coefficient ring plus the values of the symbols ``x_k``."""

    g: int
    D: int
    mode: str
    ring: object
    x: Dict[int, object]
    point: Optional[Tuple[Fraction, ...]] = None

    def const(self, c) -> MultiSeries:
        return MultiSeries.constant(c, self.g, self.D, self.ring)

    def y(self, k: int) -> MultiSeries:
        return MultiSeries.gen(k - 1, self.g, self.D, self.ring)


def make_context(g: int, D: int, mode: str = SYMBOLIC, point: Optional[Sequence] = None) -> Context:
    if g < 1 or D < 0:
        raise ValueError("need g >= 1 and D >= 0")
    if mode == SYMBOLIC:
        ring = FractionField(2 * g)
        x = {s * k: ring.gen(x_index(s * k, g)) for k in range(1, g + 1) for s in (1, -1)}
        return Context(g, D, mode, ring, x)
    if mode == EVALUATED:
        if point is None or len(point) != 2 * g:
            raise ValueError(f"evaluated mode needs a point of {2 * g} rationals")
        pt = tuple(Fraction(v) for v in point)
        if len(set(pt)) != len(pt):
            raise ValueError("evaluation point must have pairwise distinct coordinates")
        x = {s * k: pt[x_index(s * k, g)] for k in range(1, g + 1) for s in (1, -1)}
        return Context(g, D, mode, QQ, x, pt)
    raise ValueError(f"unknown mode {mode!r}")


def hyperelliptic_point(xs: Sequence) -> Tuple[Fraction, ...]:
    """``(x_1..x_g)`` -> full point with ``x_-k = -x_k``, checking the unit conditions."""
    xs = [Fraction(v) for v in xs]
    for a, u in enumerate(xs):
        if u == 0:
            raise ValueError("hyperelliptic points need x_i != 0")
        for v in xs[a + 1:]:
            if u == v or u == -v:
                raise ValueError("hyperelliptic points need x_i +- x_j != 0")
    return tuple(xs) + tuple(-v for v in xs)


# -- the action ---------------------------------------------------------------------

def phi_apply(i: int, alpha: MultiSeries, ctx: Context) -> MultiSeries:
    """Image of the series point ``alpha`` under ``phi_i`` (i signed)."""
    if i == 0 or abs(i) > ctx.g:
        raise ValueError("generator index out of range")
    a, b = ctx.x[i], ctx.x[-i]
    den = alpha - b
    if not den.constant_term():
        raise UnitError(f"phi_{i} applied to a point congruent to x_{-i}")
    r = (alpha - a) * den.inverse() * ctx.y(abs(i))
    one_minus_r = 1 - r
    return (a - r * b) * one_minus_r.inverse()


def _suffix_images(ctx: Context, j: int, n_max: int):
    """``{word: (phi_w(x_j), phi_w(x_-j))}`` for words with last letter not +-j.

    Built right to left, so each word extends an already computed suffix.
    """
    letters = alphabet(ctx.g)
    base = (ctx.const(ctx.x[j]), ctx.const(ctx.x[-j]))
    out: Dict[Tuple[int, ...], Tuple[MultiSeries, MultiSeries]] = {}
    frontier = []
    for k in letters:
        if abs(k) != j:
            w = (k,)
            out[w] = (phi_apply(k, base[0], ctx), phi_apply(k, base[1], ctx))
            frontier.append(w)
    for _ in range(1, n_max):
        nxt = []
        for w in frontier:
            A, B = out[w]
            for k in letters:
                if k == -w[0]:
                    continue
                nw = (k,) + w
                out[nw] = (phi_apply(k, A, ctx), phi_apply(k, B, ctx))
                nxt.append(nw)
        frontier = nxt
    return out


def psi_factor(ctx: Context, i: int, A: MultiSeries, B: MultiSeries) -> MultiSeries:
    """``1 + (x_i - x_-i)(A - B) / ((x_i - B)(x_-i - A))``, the cross-ratio of (x_i, x_-i; A, B)."""
    xi, xmi = ctx.x[i], ctx.x[-i]
    den = (xi - B) * (xmi - A)
    if not den.constant_term():
        raise UnitError("cross-ratio denominator is not a unit")
    return 1 + (A - B) * den.inverse() * (xi - xmi)


def base_factor(ctx: Context, i: int, j: int) -> MultiSeries:
    if i == j:
        return ctx.y(i)
    x = ctx.x
    return ctx.const(cross_ratio(x[i], x[-i], x[j], x[-j]))


# -- the table -------------------------------------------------------------------------

@dataclass
class UniversalPeriodTable:
    g: int
    D: int
    mode: str
    entries: Dict[Tuple[int, int], MultiSeries]
    point: Optional[Tuple[Fraction, ...]] = None
    meta: dict = field(default_factory=dict)

    def __getitem__(self, ij: Tuple[int, int]) -> MultiSeries:
        return self.entries[ij]

    def is_symmetric(self) -> bool:
        return all(self.entries[(i, j)] == self.entries[(j, i)] for (i, j) in self.entries)

    def evaluate_coefficients(self, point: Sequence) -> "UniversalPeriodTable":
        if self.mode != SYMBOLIC:
            raise ValueError("table is already evaluated")
        pt = tuple(Fraction(v) for v in point)
        return UniversalPeriodTable(
            self.g, self.D, EVALUATED, {k: s.evaluate_coefficients(pt) for k, s in self.entries.items()}, pt
        )

    def truncate(self, D: int) -> "UniversalPeriodTable":
        return UniversalPeriodTable(
            self.g, D, self.mode, {k: s.truncate(D) for k, s in self.entries.items()}, self.point, dict(self.meta)
        )

    def evaluate_y(self, ys: Sequence) -> List[List[object]]:
        return [[self.entries[(i, j)].evaluate_y(ys) for j in range(1, self.g + 1)] for i in range(1, self.g + 1)]

    def to_json(self) -> dict:
        out = {"g": self.g, "D": self.D, "mode": self.mode}
        if self.point is not None:
            out["point"] = [rational_to_str(v) for v in self.point]
        if self.meta:
            out["meta"] = self.meta
        out["entries"] = [
            {"i": i, "j": j, "series": series_to_json(self.entries[(i, j)])}
            for i in range(1, self.g + 1)
            for j in range(1, self.g + 1)
        ]
        return out

    @classmethod
    def from_json(cls, d: dict) -> "UniversalPeriodTable":
        point = tuple(rational_from_str(v) for v in d["point"]) if "point" in d else None
        entries = {(int(e["i"]), int(e["j"])): series_from_json(e["series"]) for e in d["entries"]}
        return cls(int(d["g"]), int(d["D"]), d["mode"], entries, point, dict(d.get("meta", {})))


def universal_periods(g: int, D: int, mode: str = SYMBOLIC, point: Optional[Sequence] = None) -> UniversalPeriodTable:
    """``p_ij`` modulo total y-degree D+1.

    Words longer than D contribute factors congruent to 1 modulo degree D+1
    and are skipped. Every entry is computed from its own word set, so the
    symmetry ``p_ij = p_ji`` is a genuine consistency check.
    """
    ctx = make_context(g, D, mode, point)
    entries = {}
    for j in range(1, g + 1):
        images = _suffix_images(ctx, j, D) if D >= 1 else {}
        for i in range(1, g + 1):
            acc = base_factor(ctx, i, j)
            for w, (A, B) in sorted(images.items(), key=lambda t: (len(t[0]), t[0])):
                if abs(w[0]) == i:
                    continue
                acc = acc * psi_factor(ctx, i, A, B)
            entries[(i, j)] = acc
    return UniversalPeriodTable(g, D, mode, entries, ctx.point)


def first_order_coefficient(ctx: Context, i: int, j: int, k: int):
    """Closed form of the y_|k| coefficient of p_ij (i != j, |k| != i, j), summed over both signs of k.

    Each sign contributes
    ``c_ij (x_i - x_-i)(x_j - x_-j)(x_k - x_-k)^2 / ((x_i - x_k)(x_-i - x_k)(x_j - x_-k)(x_-j - x_-k))``.
    """
    x = ctx.x
    c = cross_ratio(x[i], x[-i], x[j], x[-j])
    total = None
    for kk in (abs(k), -abs(k)):
        t = (
            c
            * (x[i] - x[-i])
            * (x[j] - x[-j])
            * (x[kk] - x[-kk]) ** 2
            / ((x[i] - x[kk]) * (x[-i] - x[kk]) * (x[j] - x[-kk]) * (x[-j] - x[-kk]))
        )
        total = t if total is None else total + t
    return total


# -- hyperelliptic specialization ------------------------------------------------------------

def hyperelliptic_images(g: int) -> List[MultiPoly]:
    """Polynomial images realizing ``x_-k -> -x_k`` on the 2g symbols."""
    n = 2 * g
    imgs = []
    for idx in range(n):
        if idx < g:
            imgs.append(MultiPoly.variable(idx, n))
        else:
            imgs.append(-MultiPoly.variable(idx - g, n))
    return imgs


def hyperelliptic_periods(g: int, D: int, mode: str = SYMBOLIC, xs: Optional[Sequence] = None) -> UniversalPeriodTable:
    """Periods with ``x_-k = -x_k``.

    Symbolic mode substitutes into every coefficient of the universal table;
    evaluated mode takes ``xs = (x_1..x_g)`` and computes directly at the
    point ``(x, -x)``.
    """
    if mode == SYMBOLIC:
        table = universal_periods(g, D, SYMBOLIC)
        imgs = hyperelliptic_images(g)
        ring = FractionField(2 * g)
        entries = {k: s.map_coefficients(lambda c: c.substitute(imgs), ring) for k, s in table.entries.items()}
        return UniversalPeriodTable(g, D, SYMBOLIC, entries, None, {"hyperelliptic": True})
    if xs is None:
        raise ValueError("evaluated mode needs x_1..x_g")
    table = universal_periods(g, D, EVALUATED, hyperelliptic_point(xs))
    table.meta["hyperelliptic"] = True
    return table


# -- substitution into Fourier expansions ------------------------------------------------------

def _support(F):
    for T, a in F.terms.items():
        if any(t < 0 for t in T.diag):
            raise ValueError(f"negative diagonal exponent in {T}")
        yield T, a


def required_degree(F, D_target: int) -> int:
    """Smallest table degree that determines the substitution to degree ``D_target``.

    Terms are grouped by their diagonal ``s``; a group needs the unit parts
    ``p_ii / y_i`` and the off-diagonal ``p_ij`` only to degree
    ``D_target - |s|``, and ``p_ii / y_i`` loses one degree against the table.
    """
    need = 0
    for T, _ in _support(F):
        s = sum(T.diag)
        if s > D_target:
            continue
        need = max(need, D_target - s + (1 if s else 0))
    return need


def substitute_periods(F, P: UniversalPeriodTable, D_target: int) -> MultiSeries:
    """``sum_T a_T prod_{i<j} p_ij^{2t_ij} prod_i p_ii^{t_ii}`` modulo degree ``D_target + 1``.

    Terms with trace above ``D_target`` vanish to that order and are
    skipped. Negative off-diagonal exponents use the inverse of the unit
    ``p_ij``.
    """
    if F.g != P.g:
        raise ValueError("expansion and table have different degree g")
    if D_target > F.max_trace:
        raise TruncationError(f"expansion known only to trace {F.max_trace} < {D_target}")
    if P.D < required_degree(F, D_target):
        raise TruncationError(f"table degree {P.D} too small for target {D_target}")
    g = P.g
    ring = P.entries[(1, 1)].ring
    groups: Dict[Tuple[int, ...], list] = {}
    for T, a in _support(F):
        if sum(T.diag) > D_target:
            continue
        groups.setdefault(tuple(T.diag), []).append((T, a))
    total = MultiSeries(g, D_target, ring, {})
    for s in sorted(groups):
        d = D_target - sum(s)
        units = {}
        for i in range(1, g + 1):
            if s[i - 1]:
                e = [0] * g
                e[i - 1] = 1
                units[i] = P.entries[(i, i)].divide_monomial(e).truncate(d)
        off = {(i, j): P.entries[(i, j)].truncate(d) for i in range(1, g + 1) for j in range(i + 1, g + 1)}
        cache: Dict[Tuple[Tuple[int, int], int], MultiSeries] = {}

        def power(key, n, base):
            if (key, n) not in cache:
                cache[(key, n)] = base ** n
            return cache[(key, n)]

        diag_part = MultiSeries.one(g, d, ring)
        for i, u in units.items():
            diag_part = diag_part * power(("u", i), s[i - 1], u)
        acc = MultiSeries(g, d, ring, {})
        for T, a in groups[s]:
            term = diag_part
            for (i0, j0), e in T.pairs():
                if e:
                    key = (i0 + 1, j0 + 1)
                    term = term * power(key, e, off[key])
            acc = acc + term.scale(a)
        total = total + acc.shift(s, D_target)
    return total


def lowest_term_check(F, s: Sequence[int], mode: str = SYMBOLIC, points: Optional[Sequence] = None,
                      hyperelliptic: bool = False) -> dict:
    """Sum over ``diag(T) = s`` of ``a_T prod_{i<j} c_ij^{2t_ij}`` with cross-ratios c_ij.

    ``s`` must have the minimal trace of the support. Evaluated mode lists
    one value per point (points are full 2g-tuples, or g-tuples when
    ``hyperelliptic``); the verdict is zero only if every value is.
    """
    s = tuple(int(v) for v in s)
    traces = [sum(T.diag) for T in F.terms]
    if not traces:
        raise ValueError("empty expansion")
    if sum(s) != min(traces):
        raise ValueError(f"sum of s is {sum(s)}, minimal trace is {min(traces)}")
    g = F.g
    terms = [(T, a) for T, a in F.terms.items() if tuple(T.diag) == s]

    def evaluate(ctx: Context):
        x = ctx.x
        c = {}
        for i in range(1, g + 1):
            for j in range(i + 1, g + 1):
                c[(i - 1, j - 1)] = cross_ratio(x[i], x[-i], x[j], x[-j])
        total = ctx.ring.zero()
        for T, a in terms:
            t = ctx.ring.coerce(a)
            for key, e in T.pairs():
                if e:
                    t = t * c[key] ** e
            total = total + t
        return total

    if mode == SYMBOLIC:
        ctx = make_context(g, 0, SYMBOLIC)
        if hyperelliptic:
            imgs = hyperelliptic_images(g)
            ctx.x = {k: v.substitute(imgs) for k, v in ctx.x.items()}
        value = evaluate(ctx)
        return {"value": value, "is_zero": value.is_zero(), "s": list(s)}
    if not points or len(points) < 1:
        raise ValueError("evaluated mode needs points")
    values = []
    for p in points:
        pt = hyperelliptic_point(p) if hyperelliptic else tuple(Fraction(v) for v in p)
        values.append(evaluate(make_context(g, 0, EVALUATED, pt)))
    return {"values": values, "is_zero": all(v == 0 for v in values), "s": list(s)}


def minimal_diagonals(F) -> List[Tuple[int, ...]]:
    """Distinct diagonals of minimal trace in the support, sorted."""
    traces = [sum(T.diag) for T in F.terms]
    m = min(traces)
    return sorted({tuple(T.diag) for T in F.terms if sum(T.diag) == m})
