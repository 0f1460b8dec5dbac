"""Sparse exact linear solving and decomposition into generator monomials.

The solver keeps a reduced row echelon basis of pivot rows keyed by column,
so adding an equation costs one pass over its support.  Everything is done
over the Gaussian rationals; there is no pivoting heuristic to tune and no
tolerance anywhere.

On top of it, decompose() writes a target operator as

    sum_M  pi_M(params) * op(M)

over ordered monomials M in a list of named generator operators, with the
parameter polynomials pi_M found by exact elimination and the result checked
by reconstructing the operator and subtracting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .coeffring import GR_ONE, Expr, GaussRat, MultiPoly, NotPolynomial
from .weyl import DiffOp, identity


class SparseSolver:
    """Incremental exact Gaussian elimination over sparse rows.

    Columns are arbitrary comparable hashables.  Rows are added one at a
    time; the pivot basis is kept fully reduced, so consistency is known as
    soon as a contradictory row arrives.
    """

    def __init__(self):
        self.pivots = {}        # col -> (row dict, rhs)
        self.occ = {}           # col -> set of pivot cols whose rows touch it
        self.contradictions = 0

    def add(self, coeffs: dict, rhs) -> bool:
        """Add equation sum coeffs[c]*x_c = rhs; False on contradiction."""
        row = {c: v for c, v in coeffs.items() if v}
        rhs = GaussRat.of(rhs)
        for col in list(row):
            piv = self.pivots.get(col)
            if piv is None or col not in row:
                continue
            factor = row.pop(col)
            prow, prhs = piv
            for c2, v2 in prow.items():
                if c2 == col:
                    continue
                nv = row.get(c2, GaussRat(0)) - factor * v2
                if nv:
                    row[c2] = nv
                else:
                    row.pop(c2, None)
            rhs = rhs - factor * prhs
        if not row:
            if rhs:
                self.contradictions += 1
                return False
            return True
        pivot_col = max(row)
        inv = GR_ONE / row[pivot_col]
        prow = {c: v * inv for c, v in row.items()}
        prhs = rhs * inv
        del prow[pivot_col]
        # keep existing pivot rows reduced against the new pivot
        for owner in list(self.occ.get(pivot_col, ())):
            orow, orhs = self.pivots[owner]
            f = orow.pop(pivot_col, None)
            if f is None:
                continue
            for c2, v2 in prow.items():
                nv = orow.get(c2, GaussRat(0)) - f * v2
                if nv:
                    if c2 not in orow:
                        self.occ.setdefault(c2, set()).add(owner)
                    orow[c2] = nv
                else:
                    if c2 in orow:
                        del orow[c2]
                        self.occ[c2].discard(owner)
            self.pivots[owner] = (orow, orhs - f * prhs)
        self.occ.pop(pivot_col, None)
        self.pivots[pivot_col] = (prow, prhs)
        for c2 in prow:
            self.occ.setdefault(c2, set()).add(pivot_col)
        return True

    def consistent(self) -> bool:
        return self.contradictions == 0

    def solution(self) -> dict:
        """Particular solution with all free columns set to zero."""
        return {col: rhs for col, (_, rhs) in self.pivots.items()}


# -- weight grading ------------------------------------------------------------


def term_weight(spec, weights: dict, a, exps) -> int:
    w = 0
    for i, k in enumerate(exps):
        if k:
            w += k * weights.get(spec.ring.symbols[i], 0)
    for i, k in enumerate(a):
        if k:
            w -= k * weights.get(spec.space[i], 0)
    return w


def op_weight(op: DiffOp, weights: dict):
    """Common weight of all terms, or None if inhomogeneous or zero."""
    w = None
    for a, c in op.terms.items():
        p = c.as_poly()
        for e in p.terms:
            tw = term_weight(op.spec, weights, a, e)
            if w is None:
                w = tw
            elif tw != w:
                return None
    return w


# -- decomposition into generator monomials --------------------------------------


@dataclass
class Decomposition:
    """Result of an exact decomposition attempt."""

    target: str
    generator_names: list
    degree_bound: int
    param_bound: int
    success: bool
    coefficients: dict = field(default_factory=dict)  # monomial names -> MultiPoly
    message: str = ""
    monomials_considered: int = 0
    unknowns: int = 0
    rank: int = 0
    residual: DiffOp | None = None

    @property
    def free_columns(self) -> int:
        return self.unknowns - self.rank

    def coefficient_strings(self) -> dict:
        out = {}
        for mono, poly in sorted(self.coefficients.items()):
            key = "*".join(mono) if mono else "1"
            out[key] = str(poly)
        return out


def monomial_ops(generators, degree_bound: int):
    """Ordered monomials (index tuples) -> composed operator, prefix-cached.

    A monomial (g_1, ..., g_k) with nondecreasing indices denotes the
    product g_1 . g_2 ... g_k applied left to right.
    """
    ops = {(): identity(generators[0][1].spec)}
    names = list(range(len(generators)))
    for d in range(1, degree_bound + 1):
        for mono in combinations_with_replacement(names, d):
            prefix = mono[:-1]
            ops[mono] = ops[prefix].compose(generators[mono[-1]][1])
    return ops


def _flatten(op: DiffOp) -> dict:
    out = {}
    for a, c in op.terms.items():
        p = c.as_poly()
        for e, v in p.terms.items():
            out[(a, e)] = v
    return out


def idempotent_reduce(poly: MultiPoly, symbols) -> MultiPoly:
    """Reduce modulo s^2 = s for each named symbol (s a two-valued flag)."""
    ring = poly.ring
    slots = [ring.index_of(s) for s in symbols]
    terms = {}
    for e, v in poly.terms.items():
        ee = list(e)
        for pos in slots:
            if ee[pos] > 1:
                ee[pos] = 1
        key = tuple(ee)
        s = terms.get(key)
        s = v if s is None else s + v
        if s.is_zero():
            terms.pop(key, None)
        else:
            terms[key] = s
    return MultiPoly(ring, terms)


def idempotent_reduce_op(op: DiffOp, symbols) -> DiffOp:
    """Apply idempotent_reduce to every (polynomial) coefficient of op."""
    out = DiffOp(op.spec)
    for a, c in op.terms.items():
        red = idempotent_reduce(c.as_poly(), symbols)
        if not red.is_zero():
            out.terms[a] = Expr.of_poly(red)
    return out


def decompose(
    target: DiffOp,
    generators,
    degree_bound: int,
    params=(),
    param_bound: int = 4,
    weights: dict | None = None,
    target_name: str = "target",
    idempotents=(),
) -> Decomposition:
    """Write target as a parameter-polynomial combination of generator
    monomials up to degree_bound.

    params lists the symbols the unknown coefficients may involve, with
    total degree at most param_bound.  When weights grade both target and
    generators homogeneously, the grading fixes each monomial's power of any
    graded parameter (conventionally beta) and prunes impossible monomials.
    idempotents names symbols s to be treated modulo s^2 = s (two-valued
    parameters), so the solve happens in the quotient ring.
    """
    spec = target.spec
    ring = spec.ring
    if not target.is_polynomial():
        raise NotPolynomial("decomposition target must have polynomial coefficients")
    names = [n for n, _ in generators]
    result = Decomposition(
        target=target_name,
        generator_names=names,
        degree_bound=degree_bound,
        param_bound=param_bound,
        success=False,
    )

    graded_params = []
    w_target = None
    gen_weights = None
    if weights:
        space = set(spec.space)
        graded_params = sorted(
            s for s, w in weights.items() if w and s not in space and s in ring.index
        )
        w_target = op_weight(target, weights)
        gen_weights = [op_weight(op, weights) for _, op in generators]
        if w_target is None or any(w is None for w in gen_weights):
            w_target = None
            graded_params = []
    if len(graded_params) != 1:
        # a single graded parameter keeps the power bookkeeping unambiguous
        w_target = None
        graded_params = []

    free_params = [s for s in params if s not in graded_params]
    param_pos = [ring.index_of(s) for s in free_params]
    graded_pos = [ring.index_of(s) for s in graded_params]
    idem_pos = [ring.index_of(s) for s in idempotents]

    def param_monomials():
        out = [()]
        for s in free_params:
            cap = 1 if s in idempotents else param_bound
            out = [m + (k,) for m in out for k in range(cap + 1)]
        return [m for m in out if sum(m) <= param_bound]

    pmonos = param_monomials()
    ops = monomial_ops(generators, degree_bound)
    mono_list = sorted(ops, key=lambda m: (len(m), m))

    columns = {}  # col key -> (mono, graded power, param exps)
    rows = {}     # flattened key -> {col: coeff}
    nz = ring.nsyms

    for mono in mono_list:
        op = ops[mono]
        if op.is_zero():
            continue
        if w_target is not None:
            w_mono = sum(gen_weights[i] for i in mono)
            gpow = w_mono - w_target
            if gpow < 0:
                continue
            gpows = [gpow]
        else:
            gpows = [None]
        flat = _flatten(op)
        for gpow in gpows:
            for pexp in pmonos:
                col = (mono, gpow if gpow is not None else -1, pexp)
                columns[col] = (mono, gpow, pexp)
                for (a, e), v in flat.items():
                    ee = list(e)
                    for pos, k in zip(param_pos, pexp):
                        ee[pos] += k
                    if gpow:
                        ee[graded_pos[0]] += gpow
                    for pos in idem_pos:
                        if ee[pos] > 1:
                            ee[pos] = 1
                    key = (a, tuple(ee))
                    row = rows.setdefault(key, {})
                    row[col] = row.get(col, GaussRat(0)) + v
        result.monomials_considered += 1

    result.unknowns = len(columns)
    rhs_map = {}
    for (a, e), v in _flatten(target).items():
        ee = list(e)
        for pos in idem_pos:
            if ee[pos] > 1:
                ee[pos] = 1
        key = (a, tuple(ee))
        rhs_map[key] = rhs_map.get(key, GaussRat(0)) + v
    for key in list(rhs_map):
        if not rhs_map[key]:
            del rhs_map[key]
            continue
        rows.setdefault(key, {})

    solver = SparseSolver()
    ok = True
    for key in sorted(rows, key=lambda k: (sum(k[0]), k[0], sum(k[1]), k[1]), reverse=True):
        rhs = rhs_map.get(key, GaussRat(0))
        if not solver.add(rows[key], rhs):
            ok = False
    result.rank = len(solver.pivots)
    if not ok:
        result.message = (
            "no decomposition within degree bound %d / parameter bound %d"
            % (degree_bound, param_bound)
        )
        return result

    sol = solver.solution()
    coeff_polys = {}
    for col, value in sol.items():
        if not value:
            continue
        mono, gpow, pexp = columns[col]
        exps = [0] * nz
        for pos, k in zip(param_pos, pexp):
            exps[pos] = k
        if gpow and gpow > 0:
            exps[graded_pos[0]] = gpow
        term = MultiPoly(ring, {tuple(exps): value})
        key = tuple(names[i] for i in mono)
        coeff_polys[key] = coeff_polys.get(key, ring.zero()) + term

    # exact reconstruction is the authoritative acceptance of the solve
    recon = DiffOp(spec)
    for mono in mono_list:
        key = tuple(names[i] for i in mono)
        poly = coeff_polys.get(key)
        if poly is not None and not poly.is_zero():
            recon = recon + ops[mono].scale(poly)
    residual = target - recon
    if idempotents and not residual.is_zero():
        residual = idempotent_reduce_op(residual, idempotents)
    result.residual = residual
    if residual.is_zero():
        result.success = True
        result.coefficients = {
            k: v for k, v in coeff_polys.items() if not v.is_zero()
        }
    else:
        result.message = "solver output failed exact reconstruction"
    return result
