"""Structured-text (JSON-compatible) encodings of the exact types.

Rationals are ``"num/den"`` strings, polynomials are term lists in descending
graded-lex order, series are ordered ``[exponent, coefficient]`` pairs. The
encodings are canonical, so ``dump(load(dump(x))) == dump(x)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .fraction import PolyFraction, _sorted_factors
from .poly import MultiPoly
from .qseries import QSeries
from .series import EVALUATED, QQ, SYMBOLIC, FractionField, MultiSeries


def rational_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"rationals must be encoded as strings, got {s!r}")
    return Fraction(s.strip())


def poly_to_json(p: MultiPoly) -> dict:
    return {"nvars": p.nvars, "terms": [[list(e), str(c)] for e, c in p.sorted_terms()]}


def poly_from_json(d: dict) -> MultiPoly:
    return MultiPoly(int(d["nvars"]), {tuple(e): int(c) for e, c in d["terms"]})


def fraction_to_json(f: PolyFraction) -> dict:
    return {
        "num": poly_to_json(f.num),
        "den_const": str(f.const),
        "den_factors": [[poly_to_json(p), m] for p, m in f.factors],
    }


def fraction_from_json(d: dict) -> PolyFraction:
    obj = object.__new__(PolyFraction)
    obj.num = poly_from_json(d["num"])
    obj.const = int(d["den_const"])
    obj.factors = _sorted_factors({poly_from_json(p): int(m) for p, m in d["den_factors"]})
    return obj


def coeff_to_json(c) -> Any:
    if isinstance(c, PolyFraction):
        return fraction_to_json(c)
    return rational_to_str(c)


def series_to_json(s: MultiSeries) -> dict:
    out = {"g": s.nvars, "degree": s.degree, "mode": s.mode}
    if s.mode == SYMBOLIC:
        out["x_nvars"] = s.ring.nvars
    out["terms"] = [[list(e), coeff_to_json(c)] for e, c in s.sorted_terms()]
    return out


def series_from_json(d: dict) -> MultiSeries:
    if d["mode"] == SYMBOLIC:
        ring = FractionField(int(d["x_nvars"]))
        terms = {tuple(e): fraction_from_json(c) for e, c in d["terms"]}
    elif d["mode"] == EVALUATED:
        ring = QQ
        terms = {tuple(e): rational_from_str(c) for e, c in d["terms"]}
    else:
        raise ValueError(f"unknown series mode {d['mode']!r}")
    return MultiSeries(int(d["g"]), int(d["degree"]), ring, terms)


def qseries_to_json(q: QSeries) -> dict:
    return {
        "min_exponent": q.min_exponent,
        "max_exponent": q.max_exponent,
        "series": [[n, rational_to_str(c)] for n, c in q.items()],
    }


def qseries_from_json(d: dict) -> QSeries:
    terms = {int(n): rational_from_str(c) for n, c in d["series"]}
    hi = int(d["max_exponent"])
    lo = int(d.get("min_exponent", min(terms, default=hi)))
    return QSeries(lo, [terms.get(n, 0) for n in range(lo, hi + 1)])
