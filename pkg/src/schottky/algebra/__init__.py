"""Exact arithmetic kernel: polynomials, polynomial fractions, truncated series."""

from .fraction import PolyFraction, fraction_equal
from .poly import MultiPoly, x_index, x_names
from .qseries import QSeries, qseries_inverse, qseries_mul, qseries_pow, qseries_product
from .series import (
    EVALUATED,
    QQ,
    SYMBOLIC,
    FractionField,
    MultiSeries,
    RationalField,
    monomials,
    series_inverse,
    series_mul,
    series_product,
)

__all__ = [
    "EVALUATED",
    "FractionField",
    "MultiPoly",
    "MultiSeries",
    "PolyFraction",
    "QQ",
    "QSeries",
    "RationalField",
    "SYMBOLIC",
    "fraction_equal",
    "monomials",
    "qseries_inverse",
    "qseries_mul",
    "qseries_pow",
    "qseries_product",
    "series_inverse",
    "series_mul",
    "series_product",
    "x_index",
    "x_names",
]
