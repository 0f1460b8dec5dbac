"""Normal-ordered differential operators over an exact coefficient ring.

An operator is a finite sum  sum_a c_a(q) D^a  with every coefficient to the
left of the derivatives.  Composition applies the Leibniz rule

    D^a (c f) = sum_{k <= a} binom(a, k) (D^k c) D^(a-k) f

and immediately renormal-orders, so equality of operators is equality of the
coefficient maps.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .coeffring import (
    Expr,
    GR_I,
    GR_ONE,
    GaussRat,
    MultiPoly,
    PolyRing,
)


class WeylError(Exception):
    pass


class GaugeError(WeylError):
    pass


class VariableSpec:
    """A coefficient ring together with the symbols derivatives act on.

    Space variables must be plain ring symbols (never adjoined roots), in a
    fixed order that also orders derivative multi-indices.
    """

    __slots__ = ("ring", "space", "nspace", "zero_index", "_slot")

    def __init__(self, ring: PolyRing, space):
        self.ring = ring
        self.space = tuple(space)
        for s in self.space:
            if ring.is_adjunct(s):
                raise WeylError("space variable %s is an adjoined root" % s)
        self.nspace = len(self.space)
        self.zero_index = (0,) * self.nspace
        self._slot = {s: k for k, s in enumerate(self.space)}

    def slot(self, var) -> int:
        try:
            return self._slot[var]
        except KeyError:
            raise WeylError("not a space variable: %r" % (var,)) from None

    def __eq__(self, other):
        if not isinstance(other, VariableSpec):
            return NotImplemented
        return self.ring is other.ring and self.space == other.space

    def __hash__(self):
        return hash((id(self.ring), self.space))

    def unit_index(self, var):
        idx = [0] * self.nspace
        idx[self.slot(var)] = 1
        return tuple(idx)

    def without(self, var) -> "VariableSpec":
        return VariableSpec(self.ring, tuple(s for s in self.space if s != var))


def _as_coeff(spec: VariableSpec, v) -> Expr:
    if isinstance(v, Expr):
        if v.ring is not spec.ring:
            raise WeylError("coefficient from a different ring")
        return v
    if isinstance(v, MultiPoly):
        if v.ring is not spec.ring:
            raise WeylError("coefficient from a different ring")
        return Expr.of_poly(v)
    return Expr.of_poly(spec.ring.const(v))


_SUB_CACHE = {}


def _sub_indices(a):
    """All multi-indices k with 0 <= k <= a, by increasing total order."""
    got = _SUB_CACHE.get(a)
    if got is not None:
        return got
    out = [()]
    for top in a:
        out = [k + (j,) for k in out for j in range(top + 1)]
    out.sort(key=sum)
    _SUB_CACHE[a] = out
    return out


def _binom_prod(a, k) -> int:
    n = 1
    for ai, ki in zip(a, k):
        n *= comb(ai, ki)
    return n


class DiffOp:
    """Sparse normal-ordered operator: {derivative multi-index: Expr}."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: VariableSpec, terms: dict | None = None):
        self.spec = spec
        self.terms = {}
        if terms:
            for idx, c in terms.items():
                c = _as_coeff(spec, c)
                if not c.is_zero():
                    self.terms[tuple(idx)] = c

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def coefficient(self, idx) -> Expr:
        idx = tuple(idx)
        got = self.terms.get(idx)
        if got is None:
            return Expr.of_poly(self.spec.ring.zero())
        return got

    def sorted_terms(self):
        return sorted(
            self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True
        )

    def is_polynomial(self) -> bool:
        return all(c.is_poly() for c in self.terms.values())

    # -- linear structure ------------------------------------------------------

    def _check(self, other):
        if self.spec != other.spec:
            raise WeylError("operators over different variable specs")

    def __add__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            v = out.get(idx)
            s = c if v is None else v + c
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        op = DiffOp(self.spec)
        op.terms = out
        return op

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        op = DiffOp(self.spec)
        op.terms = {idx: -c for idx, c in self.terms.items()}
        return op

    def scale(self, v) -> "DiffOp":
        """Left multiplication by a scalar or coefficient function."""
        c = _as_coeff(self.spec, v)
        op = DiffOp(self.spec)
        if c.is_zero():
            return op
        op.terms = {
            idx: w for idx, w in
            ((idx, c * w) for idx, w in self.terms.items())
            if not w.is_zero()
        }
        return op

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return self.compose(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.spec is other.spec and (self - other).is_zero()

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    # -- composition -------------------------------------------------------------

    def compose(self, other: "DiffOp") -> "DiffOp":
        """Operator product self . other, renormal-ordered."""
        self._check(other)
        spec = self.spec
        syms = spec.space
        out = {}
        need = set()
        for a in self.terms:
            need.update(_sub_indices(a))
        need = sorted(need, key=sum)
        for b, d in other.terms.items():
            dcache = {spec.zero_index: d}
            for k in need:
                if k in dcache or k == spec.zero_index:
                    continue
                j = next(i for i, v in enumerate(k) if v)
                prev = list(k)
                prev[j] -= 1
                base = dcache[tuple(prev)]
                dcache[k] = base.differentiate(syms[j])
            for a, c in self.terms.items():
                for k in _sub_indices(a):
                    dk = dcache[k]
                    if dk.is_zero():
                        continue
                    w = c * dk
                    m = _binom_prod(a, k)
                    if m != 1:
                        w = w * m
                    idx = tuple(ai - ki + bi for ai, ki, bi in zip(a, k, b))
                    v = out.get(idx)
                    s = w if v is None else v + w
                    if s.is_zero():
                        out.pop(idx, None)
                    else:
                        out[idx] = s
        op = DiffOp(spec)
        op.terms = out
        return op

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return self.compose(other) - other.compose(self)

    def __pow__(self, n: int) -> "DiffOp":
        if n < 0:
            raise WeylError("negative operator power")
        out = identity(self.spec)
        for _ in range(n):
            out = out.compose(self)
        return out

    # -- action on functions -------------------------------------------------------

    def apply(self, f) -> Expr:
        f = _as_coeff(self.spec, f)
        syms = self.spec.space
        cache = {self.spec.zero_index: f}
        need = set()
        for a in self.terms:
            need.update(_sub_indices(a))
        for k in sorted(need, key=sum):
            if k in cache:
                continue
            j = next(i for i, v in enumerate(k) if v)
            prev = list(k)
            prev[j] -= 1
            cache[k] = cache[tuple(prev)].differentiate(syms[j])
        total = Expr.of_poly(self.spec.ring.zero())
        for a, c in self.terms.items():
            da = cache[a]
            if not da.is_zero():
                total = total + c * da
        return total

    # -- structural transforms --------------------------------------------------------

    def substitute(self, bindings: dict) -> "DiffOp":
        """Substitute into every coefficient (parameters, not space variables)."""
        for s in bindings:
            if s in self.spec._slot:
                raise WeylError("cannot substitute space variable %s" % s)
        op = DiffOp(self.spec)
        for idx, c in self.terms.items():
            nc = c.substitute(bindings)
            if not nc.is_zero():
                op.terms[idx] = nc
        return op

    def conjugate(self, gauge: "GaugeData") -> "DiffOp":
        """Gauge transform G^(-1) A G via the shift d_v -> d_v + w_v."""
        if gauge.spec != self.spec:
            raise WeylError("gauge over a different variable spec")
        spec = self.spec
        shifted = {}
        for v in spec.space:
            w = gauge.shift(v)
            d = partial(spec, v)
            shifted[v] = d if w is None else d + mul_op(spec, w)
        pow_cache = {}

        def shifted_power(v, k):
            key = (v, k)
            got = pow_cache.get(key)
            if got is None:
                got = identity(spec) if k == 0 else shifted_power(v, k - 1).compose(shifted[v])
                pow_cache[key] = got
            return got

        prod_cache = {spec.zero_index: identity(spec)}

        def index_product(a):
            got = prod_cache.get(a)
            if got is not None:
                return got
            j = next(i for i in range(len(a) - 1, -1, -1) if a[i])
            prev = list(a)
            prev[j] = 0
            got = index_product(tuple(prev)).compose(shifted_power(spec.space[j], a[j]))
            prod_cache[a] = got
            return got

        total = zero_op(spec)
        for a, c in self.terms.items():
            total = total + index_product(a).scale(c)
        return total

    def project_angular(self, var, charge) -> "DiffOp":
        """Restrict to the angular momentum sector: d_var^k -> (i*charge)^k.

        The result must be free of var and have purely real coefficients;
        anything else is reported as an error.
        """
        spec = self.spec
        charge = _as_coeff(spec, charge)
        slot = spec.slot(var)
        factor = charge * GR_I
        new_spec = spec.without(var)
        out = DiffOp(new_spec)
        acc = {}
        for a, c in self.terms.items():
            k = a[slot]
            idx = tuple(v for i, v in enumerate(a) if i != slot)
            w = c if k == 0 else c * factor ** k
            v = acc.get(idx)
            s = w if v is None else v + w
            if s.is_zero():
                acc.pop(idx, None)
            else:
                acc[idx] = s
        for idx, c in acc.items():
            if c.num.uses(var) or c.den.uses(var):
                raise WeylError(
                    "projection leaves %s dependence in coefficient %s" % (var, c)
                )
            if any(not v.is_real() for v in c.num.terms.values()) or any(
                not v.is_real() for v in c.den.terms.values()
            ):
                raise WeylError("projection leaves imaginary residue: %s" % c)
            out.terms[idx] = c
        return out

    def map_space(self, change: "VariableChange") -> "DiffOp":
        """Forward change of variables into change.dst."""
        if change.src != self.spec:
            raise WeylError("change of variables has a different source spec")
        dst = change.dst
        prod_cache = {self.spec.zero_index: identity(dst)}

        def index_product(a):
            got = prod_cache.get(a)
            if got is not None:
                return got
            j = next(i for i in range(len(a) - 1, -1, -1) if a[i])
            prev = list(a)
            prev[j] -= 1
            got = index_product(tuple(prev)).compose(change.deriv_map[self.spec.space[j]])
            prod_cache[a] = got
            return got

        total = zero_op(dst)
        for a, c in self.terms.items():
            cc = c.map_ring(dst.ring, change.coord_map)
            total = total + index_product(a).scale(cc)
        return total

    # -- printing ---------------------------------------------------------------------

    def __str__(self):
        return format_op(self)

    def __repr__(self):
        return "DiffOp(%s)" % self


class GaugeData:
    """A gauge factor G recorded by its log-gradient, never materialized.

    loggrad maps space variables to w_v = d(log G)/dv.  An optional angular
    piece (var, charge) stands for a factor exp(i*charge*var).  Mixed partials
    of log G must agree, otherwise the data is rejected.
    """

    __slots__ = ("spec", "loggrad", "angular_var", "angular_charge")

    def __init__(self, spec: VariableSpec, loggrad: dict, angular=None):
        self.spec = spec
        self.loggrad = {}
        for v, w in loggrad.items():
            spec.slot(v)
            self.loggrad[v] = _as_coeff(spec, w)
        if angular is not None:
            var, charge = angular
            spec.slot(var)
            if var in self.loggrad:
                raise GaugeError("angular variable duplicated in loggrad")
            self.angular_var = var
            self.angular_charge = _as_coeff(spec, charge)
        else:
            self.angular_var = None
            self.angular_charge = None
        self._validate()

    def _validate(self):
        items = sorted(self.loggrad.items(), key=lambda t: self.spec.slot(t[0]))
        for i, (v, wv) in enumerate(items):
            for u, wu in items[i + 1:]:
                left = wv.differentiate(u)
                right = wu.differentiate(v)
                if not (left - right).is_zero():
                    raise GaugeError(
                        "log-gradient is not closed: d_%s w_%s != d_%s w_%s"
                        % (u, v, v, u)
                    )
            if self.angular_var is not None and (
                wv.num.uses(self.angular_var) or wv.den.uses(self.angular_var)
            ):
                raise GaugeError("log-gradient depends on angular variable")

    def shift(self, var):
        """Shift for d_var under conjugation.  The angular factor enters
        through the projection step only, so d_angular_var stays put here.
        """
        return self.loggrad.get(var)

    def inverse(self) -> "GaugeData":
        inv = {v: -w for v, w in self.loggrad.items()}
        ang = None
        if self.angular_var is not None:
            ang = (self.angular_var, -self.angular_charge)
        return GaugeData(self.spec, inv, ang)


class VariableChange:
    """Forward coordinate change: old coefficients and derivatives rewritten
    in the destination chart.

    coord_map sends source symbols to expressions over the destination ring;
    deriv_map sends each source space variable to a first-order operator over
    the destination spec.  Consistency demands deriv_map[v] acts on the
    images of the source coordinates as d/dv would, and that the rewritten
    derivatives commute.
    """

    __slots__ = ("src", "dst", "coord_map", "deriv_map")

    def __init__(self, src: VariableSpec, dst: VariableSpec, coord_map, deriv_map):
        self.src = src
        self.dst = dst
        self.coord_map = dict(coord_map)
        self.deriv_map = {}
        for v in src.space:
            if v not in deriv_map:
                raise WeylError("no derivative image for %s" % v)
            op = deriv_map[v]
            if op.spec != dst:
                raise WeylError("derivative image over wrong spec")
            self.deriv_map[v] = op
        self._validate()

    def _image(self, sym) -> Expr:
        if sym in self.coord_map:
            return _as_coeff(self.dst, self.coord_map[sym])
        return Expr.of_poly(self.dst.ring.var(sym))

    def _validate(self):
        for v in self.src.space:
            dv = self.deriv_map[v]
            if dv.order() != 1:
                raise WeylError("derivative image of %s must be first order" % v)
            for w in self.src.space:
                got = dv.apply(self._image(w))
                want = 1 if v == w else 0
                if not (got - _as_coeff(self.dst, want)).is_zero():
                    raise WeylError(
                        "chain rule fails: image of d_%s applied to %s gives %s"
                        % (v, w, got)
                    )
        ops = [self.deriv_map[v] for v in self.src.space]
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if not ops[i].commutator(ops[j]).is_zero():
                    raise WeylError("rewritten derivatives do not commute")


# -- constructors ---------------------------------------------------------------------


def zero_op(spec: VariableSpec) -> DiffOp:
    return DiffOp(spec)


def identity(spec: VariableSpec) -> DiffOp:
    return DiffOp(spec, {spec.zero_index: 1})


def partial(spec: VariableSpec, var, k: int = 1) -> DiffOp:
    idx = [0] * spec.nspace
    idx[spec.slot(var)] = k
    return DiffOp(spec, {tuple(idx): 1})


def mul_op(spec: VariableSpec, f) -> DiffOp:
    return DiffOp(spec, {spec.zero_index: _as_coeff(spec, f)})


def format_op(op: DiffOp, mul="*", pow_="^") -> str:
    if op.is_zero():
        return "0"
    parts = []
    for a, c in op.sorted_terms():
        dsyms = []
        for i, k in enumerate(a):
            if not k:
                continue
            d = "D[%s]" % op.spec.space[i]
            dsyms.append(d if k == 1 else d + pow_ + str(k))
        mono = mul.join(dsyms)
        ctxt = str(c)
        if not mono:
            txt = ctxt if _is_atomic_coeff(c) else "(%s)" % ctxt
        elif c == 1:
            txt = mono
        elif c == GaussRat(-1):
            txt = "-" + mono
        elif _is_atomic_coeff(c):
            txt = ctxt + mul + mono
        else:
            txt = "(%s)%s%s" % (ctxt, mul, mono)
        parts.append(txt)
    out = parts[0]
    for t in parts[1:]:
        if t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


def _is_atomic_coeff(c: Expr) -> bool:
    if not c.is_poly():
        return False
    p = c.as_poly()
    if len(p.terms) != 1:
        return False
    (exps, v), = p.terms.items()
    if not v.is_real() and v.re:
        return False
    return v.re >= 0 or not any(exps)
