"""Exact coefficient arithmetic.

Coefficients live in the field of Gaussian rationals (Fraction real and
imaginary parts).  Polynomials are sparse dicts mapping exponent tuples to
coefficients, over a ring of named symbols.  A ring may adjoin square roots
of earlier polynomials (e.g. r with r^2 = x^2 + y^2 + z^2); products are
reduced so every adjunct appears with exponent 0 or 1.  Rational functions
keep an adjunct-free, monic, gcd-reduced denominator, which makes the zero
test a plain dict emptiness check.
"""

from __future__ import annotations

from fractions import Fraction


class CoeffRingError(Exception):
    pass


class ZeroDenominator(CoeffRingError):
    pass


class UnknownSymbol(CoeffRingError):
    pass


class NotPolynomial(CoeffRingError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise CoeffRingError("not an exact rational: %r" % (x,))


class GaussRat:
    """Gaussian rational re + im*i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def of(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        return GaussRat(_frac(x))

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        other = GaussRat.of(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussRat.of(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussRat.of(other) - self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussRat.of(other)
        if not self.im and not other.im:
            return GaussRat(self.re * other.re)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRat.of(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero Gaussian rational")
        if not other.im:
            return GaussRat(self.re / other.re, self.im / other.re)
        n = other.re * other.re + other.im * other.im
        return GaussRat(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return GaussRat.of(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return GR_ONE / self ** (-k)
        out = GR_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return "%s*i" % self.im
        if self.im == 1:
            return "(%s+i)" % self.re
        if self.im == -1:
            return "(%s-i)" % self.re
        if self.im > 0:
            return "(%s+%s*i)" % (self.re, self.im)
        return "(%s-%s*i)" % (self.re, -self.im)

    def __repr__(self):
        return "GaussRat(%r, %r)" % (self.re, self.im)


GR_ZERO = GaussRat(0)
GR_ONE = GaussRat(1)
GR_I = GaussRat(0, 1)


class Adjunct:
    """Adjoined square root: symbol s at a ring position, with s^2 = square."""

    __slots__ = ("symbol", "index", "square")

    def __init__(self, symbol, index, square):
        self.symbol = symbol
        self.index = index
        self.square = square


class PolyRing:
    """Named-symbol polynomial ring, optionally with square-root adjuncts.

    Adjuncts must be declared in symbol order and each defining square may
    use only strictly earlier symbols, so reduction terminates.
    """

    def __init__(self, symbols):
        self.symbols = tuple(symbols)
        if len(set(self.symbols)) != len(self.symbols):
            raise CoeffRingError("duplicate symbols")
        self.index = {s: k for k, s in enumerate(self.symbols)}
        self.nsyms = len(self.symbols)
        self.adjuncts = []          # sorted by index, ascending
        self._adjunct_at = {}       # index -> Adjunct
        self._zero_exps = (0,) * self.nsyms

    def define_adjunct(self, symbol, square: "MultiPoly"):
        idx = self.index_of(symbol)
        if square.ring is not self:
            raise CoeffRingError("adjunct square from a different ring")
        for exps in square.terms:
            for j in range(idx, self.nsyms):
                if exps[j]:
                    raise CoeffRingError(
                        "adjunct %s square must use earlier symbols only" % symbol
                    )
        adj = Adjunct(symbol, idx, square)
        self.adjuncts.append(adj)
        self.adjuncts.sort(key=lambda a: a.index)
        self._adjunct_at[idx] = adj

    def index_of(self, symbol) -> int:
        try:
            return self.index[symbol]
        except KeyError:
            raise UnknownSymbol("unknown symbol %r" % (symbol,)) from None

    def is_adjunct(self, symbol) -> bool:
        return self.index_of(symbol) in self._adjunct_at

    # -- constructors ------------------------------------------------------

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return MultiPoly(self, {self._zero_exps: GR_ONE})

    def const(self, c) -> "MultiPoly":
        c = GaussRat.of(c)
        if c.is_zero():
            return self.zero()
        return MultiPoly(self, {self._zero_exps: c})

    def var(self, symbol, power=1) -> "MultiPoly":
        idx = self.index_of(symbol)
        exps = [0] * self.nsyms
        exps[idx] = power
        return MultiPoly(self, {tuple(exps): GR_ONE}, reduce=power > 1)

    def monomial(self, coeff, **powers) -> "MultiPoly":
        coeff = GaussRat.of(coeff)
        if coeff.is_zero():
            return self.zero()
        exps = [0] * self.nsyms
        for s, p in powers.items():
            exps[self.index_of(s)] = p
        return MultiPoly(self, {tuple(exps): coeff}, reduce=True)

    def poly(self, terms) -> "MultiPoly":
        """Build from {exps: coeff} with reduction."""
        d = {}
        for exps, c in terms.items():
            c = GaussRat.of(c)
            if not c.is_zero():
                d[tuple(exps)] = c
        return MultiPoly(self, d, reduce=True)

    # -- adjunct reduction -------------------------------------------------

    def _reduce_terms(self, terms: dict) -> dict:
        """Rewrite so every adjunct exponent is 0 or 1."""
        if not self.adjuncts:
            return terms
        while True:
            hot = None
            for exps in terms:
                for adj in self.adjuncts:
                    if exps[adj.index] >= 2:
                        hot = adj
                        break
                if hot is not None:
                    break
            if hot is None:
                return terms
            idx, square = hot.index, hot.square
            out = {}
            for exps, c in terms.items():
                e = exps[idx]
                if e < 2:
                    out[exps] = out.get(exps, GR_ZERO) + c
                    continue
                k, rem = divmod(e, 2)
                base = list(exps)
                base[idx] = rem
                # multiply square^k into the base monomial
                acc = {tuple(base): c}
                for _ in range(k):
                    nxt = {}
                    for e1, c1 in acc.items():
                        for e2, c2 in square.terms.items():
                            key = tuple(a + b for a, b in zip(e1, e2))
                            v = nxt.get(key)
                            nxt[key] = c1 * c2 if v is None else v + c1 * c2
                    acc = nxt
                for key, v in acc.items():
                    out[key] = out.get(key, GR_ZERO) + v
            terms = {e: c for e, c in out.items() if not c.is_zero()}


def grlex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Sparse multivariate polynomial: {exponent tuple: GaussRat}."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict, reduce: bool = False):
        self.ring = ring
        if reduce:
            terms = ring._reduce_terms(terms)
        self.terms = terms
        self._hash = None

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (
            len(self.terms) == 1 and self.ring._zero_exps in self.terms
        )

    def const_value(self) -> GaussRat:
        if not self.terms:
            return GR_ZERO
        if self.is_const():
            return self.terms[self.ring._zero_exps]
        raise NotPolynomial("not a constant: %s" % self)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, symbol) -> int:
        idx = self.ring.index_of(symbol)
        return max((e[idx] for e in self.terms), default=0)

    def uses(self, symbol) -> bool:
        idx = self.ring.index_of(symbol)
        return any(e[idx] for e in self.terms)

    def has_adjuncts(self) -> bool:
        return any(
            e[a.index] for e in self.terms for a in self.ring.adjuncts
        )

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading(self):
        """(exps, coeff) maximal in graded-lex order."""
        if not self.terms:
            raise CoeffRingError("leading term of zero")
        exps = max(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.ring is not other.ring:
            raise CoeffRingError("mixed rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            s = c if v is None else v + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            c = GaussRat.of(other)
            if c.is_zero():
                return self.ring.zero()
            return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(key)
                prod = c1 * c2
                if v is None:
                    out[key] = prod
                else:
                    s = v + prod
                    if s.is_zero():
                        del out[key]
                    else:
                        out[key] = s
        return MultiPoly(self.ring, out, reduce=bool(self.ring.adjuncts))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise CoeffRingError("negative power of a polynomial")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and substitution ------------------------------------------

    def diff_poly_part(self, symbol) -> "MultiPoly":
        """Plain partial derivative, ignoring adjunct dependence on symbol."""
        idx = self.ring.index_of(symbol)
        out = {}
        for e, c in self.terms.items():
            k = e[idx]
            if not k:
                continue
            d = list(e)
            d[idx] = k - 1
            key = tuple(d)
            v = out.get(key)
            nc = c * k
            out[key] = nc if v is None else v + nc
        return MultiPoly(self.ring, {e: c for e, c in out.items() if not c.is_zero()})

    def differentiate(self, symbol) -> "Expr":
        """d/d symbol, with chain rule through adjunct square roots."""
        result = Expr.of_poly(self.diff_poly_part(symbol))
        ring = self.ring
        for adj in ring.adjuncts:
            if adj.symbol == symbol:
                raise CoeffRingError(
                    "cannot differentiate with respect to adjunct %s" % symbol
                )
            if not adj.square.uses(symbol) and not _square_chain_uses(
                ring, adj, symbol
            ):
                continue
            part = {e: c for e, c in self.terms.items() if e[adj.index]}
            if not part:
                continue
            # sum c*m*s  ->  (sum c*m*s) * (d square / d symbol) / (2 square)
            p = MultiPoly(ring, part)
            dsq = adj.square.differentiate(symbol)
            result = result + Expr.of_poly(p) * dsq / Expr.of_poly(adj.square * 2)
        return result

    def substitute(self, bindings: dict) -> "Expr":
        """Simultaneous substitution symbol -> Expr/poly/rational."""
        ring = self.ring
        idx_target = {}
        for s, v in bindings.items():
            idx_target[ring.index_of(s)] = _as_expr(ring, v)
        if not idx_target:
            return Expr.of_poly(self)
        pow_cache = {}

        def target_pow(i, n):
            key = (i, n)
            got = pow_cache.get(key)
            if got is None:
                got = idx_target[i] ** n
                pow_cache[key] = got
            return got

        total = Expr.of_poly(ring.zero())
        for e, c in self.terms.items():
            keep = [0] * ring.nsyms
            factors = []
            for i, k in enumerate(e):
                if not k:
                    continue
                if i in idx_target:
                    factors.append(target_pow(i, k))
                else:
                    keep[i] = k
            term = Expr.of_poly(MultiPoly(ring, {tuple(keep): c}, reduce=True))
            for f in factors:
                term = term * f
            total = total + term
        return total

    def map_ring(self, dst: PolyRing, bindings: dict | None = None) -> "Expr":
        """Image in another ring; symbols map by name unless overridden."""
        bindings = bindings or {}
        images = {}
        for k, s in enumerate(self.ring.symbols):
            if s in bindings:
                images[k] = _as_expr(dst, bindings[s])
            elif s in dst.index:
                images[k] = Expr.of_poly(dst.var(s))
            else:
                images[k] = None
        pow_cache = {}

        def image_pow(i, n):
            key = (i, n)
            got = pow_cache.get(key)
            if got is None:
                got = images[i] ** n
                pow_cache[key] = got
            return got

        total = Expr.of_poly(dst.zero())
        for e, c in self.terms.items():
            term = Expr.of_poly(dst.const(c))
            for i, k in enumerate(e):
                if not k:
                    continue
                if images[i] is None:
                    raise UnknownSymbol(
                        "symbol %s has no image in target ring"
                        % self.ring.symbols[i]
                    )
                term = term * image_pow(i, k)
            total = total + term
        return total

    def evaluate(self, point: dict) -> GaussRat:
        """Value at a full rational point (adjunct symbols included explicitly)."""
        out = GR_ZERO
        vals = {self.ring.index_of(s): GaussRat.of(v) for s, v in point.items()}
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if not k:
                    continue
                if i not in vals:
                    raise UnknownSymbol(
                        "no value for %s" % self.ring.symbols[i]
                    )
                v = v * vals[i] ** k
            out = out + v
        return out

    # -- division ------------------------------------------------------------

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient self/other; raises NotPolynomial if not divisible."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.has_adjuncts():
            raise NotPolynomial("divisor must be adjunct-free")
        if other.is_const():
            return self * (GR_ONE / other.const_value())
        lt_e, lt_c = other.leading()
        rem = dict(self.terms)
        quot = {}
        while rem:
            r_e = max(rem, key=grlex_key)
            r_c = rem[r_e]
            q_e = tuple(a - b for a, b in zip(r_e, lt_e))
            if any(x < 0 for x in q_e):
                raise NotPolynomial("not divisible")
            q_c = r_c / lt_c
            quot[q_e] = quot.get(q_e, GR_ZERO) + q_c
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(q_e, e2))
                v = rem.get(key, GR_ZERO) - q_c * c2
                if v.is_zero():
                    rem.pop(key, None)
                else:
                    rem[key] = v
        return MultiPoly(self.ring, {e: c for e, c in quot.items() if not c.is_zero()})

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotPolynomial:
            return False

    # -- printing -------------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return "MultiPoly(%s)" % self


def _square_chain_uses(ring, adj, symbol) -> bool:
    """Does adj's square depend on symbol through earlier adjuncts?"""
    pend = [adj.square]
    seen = set()
    while pend:
        p = pend.pop()
        for e in p.terms:
            for a in ring.adjuncts:
                if e[a.index] and a.index not in seen:
                    seen.add(a.index)
                    if a.square.uses(symbol):
                        return True
                    pend.append(a.square)
    return False


def format_poly(p: MultiPoly, mul="*", pow_="^") -> str:
    if p.is_zero():
        return "0"
    ring = p.ring
    parts = []
    for e, c in p.sorted_terms():
        syms = []
        for i, k in enumerate(e):
            if not k:
                continue
            if k == 1:
                syms.append(ring.symbols[i])
            else:
                syms.append("%s%s%d" % (ring.symbols[i], pow_, k))
        mono = mul.join(syms)
        if not mono:
            txt = str(c)
        elif c == 1:
            txt = mono
        elif c == -1:
            txt = "-" + mono
        else:
            txt = str(c) + mul + mono
        parts.append(txt)
    out = parts[0]
    for t in parts[1:]:
        if t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


# -- gcd over the coefficient field -----------------------------------------


def _content_gr(p: MultiPoly) -> GaussRat:
    for _, c in p.sorted_terms():
        return c
    return GR_ONE


def _monic(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    _, lc = p.leading()
    if lc == 1:
        return p
    return p * (GR_ONE / lc)


def _min_exps_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """gcd when either argument is a single term."""
    mins = None
    for src in (a, b):
        for e in src.terms:
            if mins is None:
                mins = list(e)
            else:
                mins = [min(x, y) for x, y in zip(mins, e)]
    return MultiPoly(a.ring, {tuple(mins): GR_ONE})


def _main_symbol(a: MultiPoly, b: MultiPoly):
    n = a.ring.nsyms
    for i in range(n - 1, -1, -1):
        if any(e[i] for e in a.terms) or any(e[i] for e in b.terms):
            return i
    return None


def _split_by(p: MultiPoly, idx: int) -> dict:
    """Degree in symbol idx -> coefficient poly (exponent at idx zeroed)."""
    out = {}
    for e, c in p.terms.items():
        k = e[idx]
        rest = list(e)
        rest[idx] = 0
        d = out.setdefault(k, {})
        key = tuple(rest)
        d[key] = d.get(key, GR_ZERO) + c
    return {
        k: MultiPoly(p.ring, {e: c for e, c in d.items() if not c.is_zero()})
        for k, d in out.items()
    }


def _join_by(parts: dict, idx: int, ring: PolyRing) -> MultiPoly:
    terms = {}
    for k, poly in parts.items():
        for e, c in poly.terms.items():
            key = list(e)
            key[idx] = e[idx] + k
            terms[tuple(key)] = c
    return MultiPoly(ring, terms)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd of adjunct-free polynomials over the Gaussian rationals."""
    if a.is_zero():
        return _monic(b)
    if b.is_zero():
        return _monic(a)
    if a.has_adjuncts() or b.has_adjuncts():
        raise NotPolynomial("gcd arguments must be adjunct-free")
    if a.is_const() or b.is_const():
        return a.ring.one()
    if a.terms == b.terms:
        return _monic(a)
    if len(a.terms) == 1 or len(b.terms) == 1:
        return _min_exps_gcd(a, b)
    idx = _main_symbol(a, b)
    if idx is None:
        return a.ring.one()
    da = a.degree_in(a.ring.symbols[idx])
    db = b.degree_in(b.ring.symbols[idx])
    if da == 0 or db == 0:
        # one argument is free of the main symbol: gcd divides its coeff gcd
        free, other = (a, b) if da == 0 else (b, a)
        g = free
        for p in _split_by(other, idx).values():
            g = poly_gcd(g, p)
            if g.is_const():
                return a.ring.one()
        return _monic(g)
    f, g = (a, b) if da >= db else (b, a)
    cf, pf = _content_and_primitive(f, idx)
    cg, pg = _content_and_primitive(g, idx)
    cont = poly_gcd(cf, cg)
    pp = _primitive_prs(pf, pg, idx)
    return _monic(cont * pp)


def _content_and_primitive(p: MultiPoly, idx: int):
    parts = _split_by(p, idx)
    cont = None
    for q in parts.values():
        cont = q if cont is None else poly_gcd(cont, q)
        if cont.is_const():
            cont = p.ring.one()
            break
    cont = _monic(cont)
    if cont.is_const():
        return p.ring.one(), p
    prim = _join_by(
        {k: q.exact_div(cont) for k, q in parts.items()}, idx, p.ring
    )
    return cont, prim


def _primitive_prs(f: MultiPoly, g: MultiPoly, idx: int) -> MultiPoly:
    """Gcd of two primitive polynomials via the subresultant remainder
    sequence: each pseudo-remainder is divided by a predicted factor, which
    keeps coefficient growth polynomial without per-step content extraction.
    """
    ring = f.ring
    sym = ring.symbols[idx]
    if f.degree_in(sym) < g.degree_in(sym):
        f, g = g, f
    lead = ring.one()
    h = ring.one()
    while True:
        delta = f.degree_in(sym) - g.degree_in(sym)
        r = _pseudo_rem(f, g, idx)
        if r.is_zero():
            _, prim = _content_and_primitive(g, idx)
            return prim
        if not r.degree_in(sym):
            return ring.one()
        f, g = g, r.exact_div(lead * h ** delta)
        lead = _split_by(f, idx)[f.degree_in(sym)]
        if delta:
            h = (lead ** delta).exact_div(h ** (delta - 1))


def _pseudo_rem(f: MultiPoly, g: MultiPoly, idx: int) -> MultiPoly:
    """Strict pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g."""
    ring = f.ring
    sym = ring.symbols[idx]
    dg = g.degree_in(sym)
    g_parts = _split_by(g, idx)
    lc_g = g_parts[dg]
    rem = f
    scale = f.degree_in(sym) - dg + 1
    while True:
        dr = rem.degree_in(sym)
        if rem.is_zero() or dr < dg:
            break
        r_parts = _split_by(rem, idx)
        lc_r = r_parts[dr]
        shift = ring.var(sym, dr - dg) if dr > dg else ring.one()
        rem = rem * lc_g - g * (lc_r * shift)
        scale -= 1
    while scale > 0:
        rem = rem * lc_g
        scale -= 1
    return rem


# -- rational functions -------------------------------------------------------


def _as_expr(ring: PolyRing, v) -> "Expr":
    if isinstance(v, Expr):
        if v.num.ring is not ring:
            raise CoeffRingError("expression from a different ring")
        return v
    if isinstance(v, MultiPoly):
        if v.ring is not ring:
            raise CoeffRingError("polynomial from a different ring")
        return Expr.of_poly(v)
    return Expr.of_poly(ring.const(v))


class Expr:
    """Reduced rational function num/den.

    Invariants: den is adjunct-free, monic in graded-lex order, and shares
    no non-unit factor with num's adjunct-free content.  Zero is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly, _trusted=False):
        if not _trusted:
            raise CoeffRingError("use Expr.of_poly or Expr.make")
        self.num = num
        self.den = den

    @staticmethod
    def of_poly(p: MultiPoly) -> "Expr":
        return Expr(p, p.ring.one(), _trusted=True)

    @staticmethod
    def make(num: MultiPoly, den: MultiPoly) -> "Expr":
        if num.ring is not den.ring:
            raise CoeffRingError("mixed rings")
        return _reduce_fraction(num, den)

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_const()

    def as_poly(self) -> MultiPoly:
        if not self.den.is_const():
            raise NotPolynomial("denominator %s is not constant" % self.den)
        c = self.den.const_value()
        if c == 1:
            return self.num
        return self.num * (GR_ONE / c)

    def const_value(self) -> GaussRat:
        return self.as_poly().const_value()

    def __add__(self, other):
        other = _as_expr(self.ring, other)
        if self.den.terms == other.den.terms:
            return Expr.make(self.num + other.num, self.den)
        return Expr.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_expr(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Expr(-self.num, self.den, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            c = GaussRat.of(other)
            if c.is_zero():
                return Expr.of_poly(self.ring.zero())
            return Expr(self.num * c, self.den, _trusted=True)
        other = _as_expr(self.ring, other)
        if self.den.is_const() and other.den.is_const():
            num = self.num * other.num
            c = self.den.const_value() * other.den.const_value()
            if c != 1:
                num = num * (GR_ONE / c)
            return Expr.of_poly(num)
        return Expr.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_expr(self.ring, other)
        if other.is_zero():
            raise ZeroDenominator("division by zero expression")
        return Expr.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_expr(self.ring, other) / self

    def __pow__(self, n: int):
        if n < 0:
            if self.is_zero():
                raise ZeroDenominator("zero to a negative power")
            return Expr.make(self.den ** (-n), self.num ** (-n))
        return Expr.make(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, MultiPoly)):
            other = _as_expr(self.ring, other)
        if not isinstance(other, Expr):
            return NotImplemented
        if self.den.terms == other.den.terms:
            return self.num == other.num
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def differentiate(self, symbol) -> "Expr":
        dn = self.num.differentiate(symbol)
        if self.den.is_const():
            c = self.den.const_value()
            return dn if c == 1 else dn * (GR_ONE / c)
        dd = self.den.differentiate(symbol)
        den_e = Expr.of_poly(self.den)
        return (dn * den_e - Expr.of_poly(self.num) * dd) / (den_e * den_e)

    def substitute(self, bindings: dict) -> "Expr":
        num = self.num.substitute(bindings)
        den = self.den.substitute(bindings)
        if den.is_zero():
            raise ZeroDenominator("substitution makes denominator zero")
        return num / den

    def map_ring(self, dst: PolyRing, bindings: dict | None = None) -> "Expr":
        num = self.num.map_ring(dst, bindings)
        den = self.den.map_ring(dst, bindings)
        if den.is_zero():
            raise ZeroDenominator("mapping makes denominator zero")
        return num / den

    def __str__(self):
        if self.den.is_const() and self.den.const_value() == 1:
            return str(self.num)
        n = str(self.num)
        if len(self.num.terms) > 1:
            n = "(%s)" % n
        d = str(self.den)
        if len(self.den.terms) > 1:
            d = "(%s)" % d
        return "%s/%s" % (n, d)

    def __repr__(self):
        return "Expr(%s)" % self


def reduce(num: MultiPoly, den: MultiPoly) -> Expr:
    """Reduced rational function; rejects a zero denominator."""
    return Expr.make(num, den)


def _adjunct_content(p: MultiPoly) -> MultiPoly:
    """gcd of p's adjunct-free coefficient polys, grouped by adjunct monomial."""
    ring = p.ring
    adj_idx = [a.index for a in ring.adjuncts]
    if not adj_idx:
        return p
    groups = {}
    for e, c in p.terms.items():
        marker = tuple(e[i] for i in adj_idx)
        base = list(e)
        for i in adj_idx:
            base[i] = 0
        d = groups.setdefault(marker, {})
        d[tuple(base)] = c
    g = None
    for d in groups.values():
        q = MultiPoly(ring, d)
        g = q if g is None else poly_gcd(g, q)
        if g.is_const():
            return ring.one()
    return g


def _reduce_fraction(num: MultiPoly, den: MultiPoly) -> Expr:
    ring = num.ring
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if num.is_zero():
        return Expr(ring.zero(), ring.one(), _trusted=True)
    # rationalize: eliminate adjunct symbols from the denominator
    while den.has_adjuncts():
        adj = next(a for a in reversed(ring.adjuncts)
                   if any(e[a.index] for e in den.terms))
        idx = adj.index
        d1_terms, d0_terms = {}, {}
        for e, c in den.terms.items():
            if e[idx]:
                base = list(e)
                base[idx] = 0
                d1_terms[tuple(base)] = c
            else:
                d0_terms[e] = c
        d0 = MultiPoly(ring, d0_terms)
        d1 = MultiPoly(ring, d1_terms)
        s = ring.var(adj.symbol)
        conj = d0 - d1 * s
        num = num * conj
        den = d0 * d0 - d1 * d1 * adj.square
        if den.is_zero():
            raise ZeroDenominator("denominator vanishes identically")
    if den.is_const():
        c = den.const_value()
        if c == 1:
            return Expr(num, den, _trusted=True)
        return Expr(num * (GR_ONE / c), ring.one(), _trusted=True)
    g = _adjunct_content(num)
    if not g.is_const():
        g = poly_gcd(g, den)
        if not g.is_const():
            num = _div_grouped(num, g)
            den = den.exact_div(g)
    if den.is_const():
        c = den.const_value()
        if c != 1:
            num = num * (GR_ONE / c)
        return Expr(num, num.ring.one(), _trusted=True)
    _, lc = den.leading()
    if lc != 1:
        inv = GR_ONE / lc
        num = num * inv
        den = den * inv
    return Expr(num, den, _trusted=True)


def _div_grouped(num: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Exact division of num by adjunct-free g, adjunct monomials untouched."""
    ring = num.ring
    adj_idx = [a.index for a in ring.adjuncts]
    if not adj_idx or not num.has_adjuncts():
        return num.exact_div(g)
    groups = {}
    for e, c in num.terms.items():
        marker = tuple(e[i] for i in adj_idx)
        base = list(e)
        for i in adj_idx:
            base[i] = 0
        d = groups.setdefault(marker, {})
        d[tuple(base)] = c
    out = {}
    for marker, d in groups.items():
        q = MultiPoly(ring, d).exact_div(g)
        for e, c in q.terms.items():
            key = list(e)
            for i, m in zip(adj_idx, marker):
                key[i] = m
            out[tuple(key)] = c
    return MultiPoly(ring, out)
