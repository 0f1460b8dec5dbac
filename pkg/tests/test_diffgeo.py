"""Cometrics, Laplace-Beltrami operators, and exact scalar curvature."""

import random

from weylcalc.coeffring import Expr
from weylcalc.diffgeo import (
    brioschi_curvature,
    cylindrical_cometric,
    effective_potential,
    invert_and_det,
    laplace_beltrami,
    radial_parabolic_cometric,
    scalar_curvature,
    sphere_polar_metric,
    verify_geometry,
    verify_schrodinger_form,
)
from weylcalc.spaces import RRP, RU, RU_SPEC
from weylcalc.weyl import format_op


def test_cylindrical_cometric_entries():
    g = cylindrical_cometric()
    assert g.dim == 3
    r, rho = RRP.var("r"), RRP.var("rho")
    one = Expr.of_poly(RRP.one())
    assert (g.entry(0, 0) - one).is_zero()
    assert (g.entry(0, 1) - Expr.make(rho, r)).is_zero()
    assert (g.entry(1, 0) - g.entry(0, 1)).is_zero()
    assert (g.entry(1, 1) - one).is_zero()
    assert g.entry(0, 2).is_zero() and g.entry(2, 0).is_zero()
    assert (g.entry(2, 2) - Expr.make(RRP.one(), rho * rho)).is_zero()


def test_cylindrical_laplacian():
    lap = laplace_beltrami(cylindrical_cometric())
    assert format_op(lap) == (
        "D[r]^2 + (2*rho/r)*D[r]*D[rho] + D[rho]^2 + (1/rho^2)*D[phi]^2"
        " + (2/r)*D[r] + (1/rho)*D[rho]"
    )


def test_laplacian_principal_symbol_matches_cometric():
    g = cylindrical_cometric()
    lap = laplace_beltrami(g)
    # coefficient of D[i]D[j] is g^ij for i != j, g^ii on the diagonal
    assert (lap.coefficient((2, 0, 0)) - g.entry(0, 0)).is_zero()
    assert (lap.coefficient((1, 1, 0)) - g.entry(0, 1) * 2).is_zero()
    assert (lap.coefficient((0, 0, 2)) - g.entry(2, 2)).is_zero()


def test_displayed_matrix_entries():
    g = radial_parabolic_cometric()
    assert g.dim == 2
    r, u = RU.var("r"), RU.var("u")
    half_r = Expr.of_poly(r) * Expr.make(RU.one(), RU.const(2))
    assert (g.entry(0, 0) - half_r).is_zero()
    assert (g.entry(0, 1) - Expr.of_poly(u)).is_zero()
    assert (g.entry(1, 1) - Expr.of_poly(r * u * 2)).is_zero()


def test_determinant_and_inverse():
    g = radial_parabolic_cometric()
    inv, det = invert_and_det(g)
    r, u = RU.var("r"), RU.var("u")
    sep = r * r - u
    assert (det - Expr.of_poly(u * sep)).is_zero()
    assert (inv[0][0] - Expr.make(r * 2, sep)).is_zero()
    assert (inv[0][1] - Expr.make(-RU.one(), sep)).is_zero()
    assert (inv[1][0] - inv[0][1]).is_zero()
    assert (inv[1][1] - Expr.make(r, u * sep * 2)).is_zero()
    # inverse really is the two-sided inverse
    for i in range(2):
        for j in range(2):
            acc = None
            for k in range(2):
                term = g.entry(i, k) * inv[k][j]
                acc = term if acc is None else acc + term
            want = Expr.of_poly(RU.one()) if i == j else Expr.of_poly(RU.zero())
            assert (acc - want).is_zero()


def test_scalar_curvature_two_readings():
    g = radial_parabolic_cometric()
    rows = [[g.entry(i, j) for j in range(2)] for i in range(2)]
    r, u = RU.var("r"), RU.var("u")
    sep = r * r - u
    # the displayed matrix taken as the metric
    printed = scalar_curvature(rows, RU_SPEC).scalar
    want = Expr.make(r * (u * 4 - RU.one()), u * sep * sep * 2)
    assert (printed - want).is_zero()
    # the geometry whose cometric is the displayed matrix is flat
    inv, _ = invert_and_det(g)
    assert scalar_curvature(inv, RU_SPEC).scalar.is_zero()


def test_unit_sphere_curvature_sign():
    metric, spec = sphere_polar_metric()
    rep = scalar_curvature(metric, spec)
    assert str(rep.scalar) == "2"


def test_brioschi_agrees_with_christoffel_route():
    rng = random.Random(3003)
    from fractions import Fraction

    r, u = RU.var("r"), RU.var("u")

    def entry():
        a = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        b = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
        c = Fraction(rng.randint(1, 4), rng.randint(1, 4))
        return Expr.of_poly(RU.const(c) + r * a + u * b)

    zero = Expr.of_poly(RU.zero())
    for _ in range(40):
        f, g = entry(), entry()
        rows = [[f, zero], [zero, g]]
        lhs = scalar_curvature(rows, RU_SPEC).scalar
        rhs = brioschi_curvature(rows, RU_SPEC)
        assert (lhs - rhs).is_zero(), "curvature routes disagree for diag(%s, %s)" % (f, g)


def test_effective_potential():
    r, u, beta, mu = (RU.var(s) for s in ("r", "u", "beta", "mu"))
    want = Expr.of_poly(r * beta * beta) * Expr.make(RU.one(), RU.const(2)) + Expr.make(
        r * (mu * mu * 4 - RU.one()), u * 8
    )
    assert (effective_potential() - want).is_zero()


def test_geometry_checks_pass():
    for res in verify_geometry():
        assert res.passed, "%s: %s" % (res.check, res.witnesses)


def test_schrodinger_form_check():
    res = verify_schrodinger_form()
    assert res.passed
    assert any("p^2" in w for w in res.witnesses), (
        "the symbolic-parity defect should be announced: %s" % res.witnesses
    )
