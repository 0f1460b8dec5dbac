"""Exact operator calculus for normal-ordered differential operators."""

from .coeffring import (
    CoeffRingError,
    Expr,
    GaussRat,
    MultiPoly,
    NotPolynomial,
    PolyRing,
    UnknownSymbol,
    ZeroDenominator,
    poly_gcd,
    reduce,
)

__all__ = [
    "CoeffRingError",
    "Expr",
    "GaussRat",
    "MultiPoly",
    "NotPolynomial",
    "PolyRing",
    "UnknownSymbol",
    "ZeroDenominator",
    "poly_gcd",
    "reduce",
]
