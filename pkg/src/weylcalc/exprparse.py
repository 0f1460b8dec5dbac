"""Text form of operators: tokenizer, parser, and the workspace they live in.

Grammar (whitespace insignificant):

    expr   := ('-')? term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' uint)?
    atom   := uint | symbol | 'D[' var ']' | '(' expr ')'

Multiplication is composition, left to right; juxtaposition is not
multiplication, so multi-letter symbols stay unambiguous.  Division demands
an order-zero divisor, which also covers rational literals ('1/2' is 1
divided by 2).  The symbol i is the imaginary unit; D[v] differentiates
with respect to one of the six chart variables.  The printers in weyl and
coeffring emit exactly this grammar, so printing and parsing round-trip.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffring import Expr, GaussRat, PolyRing, ZeroDenominator
from .weyl import DiffOp, VariableSpec, identity, mul_op, partial

WS = PolyRing(("x", "y", "z", "alpha", "E", "r", "u", "rho", "beta", "mu", "p", "n"))
_WS_SPEC = VariableSpec(WS, ("x", "y", "z", "r", "u", "rho"))
_IMAGINARY = "i"


def workspace_spec() -> VariableSpec:
    """The chart every parsed operator acts on."""
    return _WS_SPEC


class ParseError(ValueError):
    """Syntax or symbol error, with the 1-based source column."""

    def __init__(self, message: str, column: int):
        super().__init__("column %d: %s" % (column, message))
        self.column = column


_PUNCT = set("+-*/^()[]")


def tokenize(text: str):
    """(kind, value, column) triples; kinds: int, name, punct, end."""
    out = []
    pos = 0
    size = len(text)
    while pos < size:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        col = pos + 1
        if ch.isdigit():
            end = pos
            while end < size and text[end].isdigit():
                end += 1
            out.append(("int", int(text[pos:end]), col))
            pos = end
            continue
        if ch.isalpha():
            end = pos
            while end < size and text[end].isalpha():
                end += 1
            out.append(("name", text[pos:end], col))
            pos = end
            continue
        if ch in _PUNCT:
            out.append(("punct", ch, col))
            pos += 1
            continue
        raise ParseError("unexpected character %r" % ch, col)
    out.append(("end", None, size + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.used_derivative = False

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_punct(self, ch: str):
        kind, value, col = self.take()
        if kind != "punct" or value != ch:
            raise ParseError("expected %r" % ch, col)

    def parse(self) -> DiffOp:
        op = self.expr()
        kind, value, col = self.peek()
        if kind != "end":
            raise ParseError("unexpected %r after expression" % (value,), col)
        return op

    def expr(self) -> DiffOp:
        kind, value, _ = self.peek()
        negate = kind == "punct" and value == "-"
        if negate:
            self.take()
        op = self.term()
        if negate:
            op = op.scale(-1)
        while True:
            kind, value, _ = self.peek()
            if kind == "punct" and value in "+-":
                self.take()
                rhs = self.term()
                op = op + rhs if value == "+" else op - rhs
            else:
                return op

    def term(self) -> DiffOp:
        op = self.factor()
        while True:
            kind, value, col = self.peek()
            if kind == "punct" and value in "*/":
                self.take()
                rhs = self.factor()
                if value == "*":
                    op = op.compose(rhs)
                else:
                    op = op.scale(self._invert(rhs, col))
            else:
                return op

    def _invert(self, divisor: DiffOp, col: int) -> Expr:
        if divisor.order() > 0:
            raise ParseError("divisor must be a scalar, not an operator", col)
        coeff = divisor.coefficient(divisor.spec.zero_index)
        try:
            return Expr.of_poly(WS.one()) / coeff
        except ZeroDenominator:
            raise ParseError("division by zero", col) from None

    def factor(self) -> DiffOp:
        op = self.atom()
        kind, value, _ = self.peek()
        if kind == "punct" and value == "^":
            self.take()
            kind, value, col = self.take()
            if kind != "int":
                raise ParseError("exponent must be an unsigned integer", col)
            out = identity(_WS_SPEC)
            for _ in range(value):
                out = out.compose(op)
            return out
        return op

    def atom(self) -> DiffOp:
        kind, value, col = self.take()
        if kind == "int":
            return identity(_WS_SPEC).scale(Fraction(value))
        if kind == "punct" and value == "(":
            op = self.expr()
            self.expect_punct(")")
            return op
        if kind == "name" and value == "D":
            self.expect_punct("[")
            kind, var, vcol = self.take()
            if kind != "name":
                raise ParseError("expected a variable name", vcol)
            self.expect_punct("]")
            if var not in WS.index and var != _IMAGINARY:
                raise ParseError("unknown symbol %r" % var, vcol)
            if var not in _WS_SPEC._slot:
                raise ParseError("D[%s]: not a chart variable" % var, vcol)
            self.used_derivative = True
            return partial(_WS_SPEC, var)
        if kind == "name":
            if value == _IMAGINARY:
                return identity(_WS_SPEC).scale(GaussRat(0, 1))
            if value in WS.index:
                return mul_op(_WS_SPEC, Expr.of_poly(WS.var(value)))
            raise ParseError("unknown symbol %r" % value, col)
        raise ParseError("expected a number, symbol, D[...], or parenthesis", col)


def parse(text: str) -> DiffOp:
    """Parse an operator expression over the workspace chart."""
    return _Parser(text).parse()


def parse_scalar(text: str) -> Expr:
    """Parse a derivative-free expression to an exact coefficient."""
    parser = _Parser(text)
    op = parser.parse()
    if parser.used_derivative:
        raise ParseError("scalar expression must not contain D[...]", 1)
    return op.coefficient(op.spec.zero_index)
