"""Expression grammar: tokens, parsing, scalar restriction, and canonical
print/parse round trips."""

from fractions import Fraction

import pytest

from weylcalc.coeffring import GaussRat
from weylcalc.exprparse import ParseError, parse, parse_scalar, tokenize, workspace_spec
from weylcalc.registry import operator, operator_names
from weylcalc.weyl import format_op, identity, mul_op, partial


WS_SPEC = workspace_spec()


def test_tokenize_positions():
    toks = tokenize("1/2*r^2")
    assert toks == [
        ("int", 1, 1),
        ("punct", "/", 2),
        ("int", 2, 3),
        ("punct", "*", 4),
        ("name", "r", 5),
        ("punct", "^", 6),
        ("int", 2, 7),
        ("end", None, 8),
    ]


def test_tokenize_rejects_stray_characters():
    with pytest.raises(ParseError) as err:
        tokenize("r + $")
    assert "column 5" in str(err.value)


def test_parse_basics():
    ring = WS_SPEC.ring
    r = ring.var("r")
    assert (parse("r") - mul_op(WS_SPEC, r)).is_zero()
    assert (parse("D[r]") - partial(WS_SPEC, "r")).is_zero()
    assert (parse("3") - identity(WS_SPEC).scale(Fraction(3))).is_zero()
    assert (parse("-r + r").is_zero())
    assert (parse("i*i") + identity(WS_SPEC)).is_zero()


def test_parse_precedence_and_powers():
    # ^ binds tighter than *, which binds tighter than +/-
    lhs = parse("2*r^2 - u")
    ring = WS_SPEC.ring
    want = mul_op(WS_SPEC, ring.var("r") ** 2 * 2 - ring.var("u"))
    assert (lhs - want).is_zero()
    assert (parse("D[r]^3") - partial(WS_SPEC, "r", 3)).is_zero()
    # operator products multiply left to right
    canonical = parse("D[r]*r - r*D[r]")
    assert format_op(canonical) == "1"


def test_parse_division_requires_order_zero_divisor():
    assert format_op(parse("1/2*r")) == "1/2*r"
    assert format_op(parse("r/2")) == "1/2*r"
    # dividing by a multiplication operator yields a rational coefficient
    ring = WS_SPEC.ring
    from weylcalc.coeffring import Expr

    want = identity(WS_SPEC).scale(Expr.make(ring.var("r"), ring.var("u")))
    assert (parse("r/u") - want).is_zero()
    with pytest.raises(ParseError):
        parse("1/D[r]")
    with pytest.raises(ParseError):
        parse("r/(2 - 2)")


def test_parse_error_positions_and_messages():
    with pytest.raises(ParseError) as err:
        parse("D[q]")
    assert "unknown symbol 'q'" in str(err.value)
    with pytest.raises(ParseError) as err:
        parse("2r")
    assert "column 2" in str(err.value)
    with pytest.raises(ParseError):
        parse("r +")
    with pytest.raises(ParseError):
        parse("(r")
    with pytest.raises(ParseError):
        parse("r^-1")
    with pytest.raises(ParseError):
        parse("")


def test_scalar_parser_rejects_derivatives():
    e = parse_scalar("(1 + r)^2")
    ring = WS_SPEC.ring
    one = ring.one()
    assert (e.as_poly() - (one + ring.var("r")) ** 2).is_zero()
    with pytest.raises(ParseError):
        parse_scalar("D[r]")
    with pytest.raises(ParseError):
        parse_scalar("r*D[u]*u")


def test_imaginary_unit_versus_symbols():
    # i is the imaginary unit, not a symbol
    sq = parse("i^2")
    assert (sq + identity(WS_SPEC)).is_zero()
    scalar = parse_scalar("i*n")
    assert str(scalar) == "i*n"


def test_round_trip_is_canonical_for_all_named_operators():
    # printing then parsing is a fixed point of printing, for every catalog
    # operator, across all three source charts
    for name in operator_names():
        op, _ = operator(name)
        printed = format_op(op)
        reparsed = parse(printed)
        assert format_op(reparsed) == printed, (
            "%s reprints differently: %r vs %r" % (name, format_op(reparsed), printed)
        )


def test_parse_whitespace_insensitive():
    a = parse("  r *D[r] + 1/2 * u ")
    b = parse("r*D[r]+1/2*u")
    assert (a - b).is_zero()
