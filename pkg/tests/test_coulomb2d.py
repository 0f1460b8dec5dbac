"""Two-variable algebraic operators: the derivation pipeline, integrals of
motion, the order-5 commutator, and the cubic closure of the integral algebra."""

from fractions import Fraction

import pytest

from weylcalc.coulomb2d import (
    b_a,
    c_op,
    compute_c_and_verify_leading,
    derive_h_pipeline,
    h_a,
    l_a,
    relate_h_ha,
    verify_cubic,
    verify_integrals,
)
from weylcalc.flagrep import is_invariant
from weylcalc.linsolve import idempotent_reduce_op
from weylcalc.spaces import RU, RU_SPEC
from weylcalc.weyl import format_op


def test_pipeline_reproduces_algebraic_operator():
    for parity in (0, 1):
        res, op = derive_h_pipeline(parity)
        assert res.passed, "parity %d pipeline failed: %s" % (parity, res.witnesses)
        # the projected operator lives on the two-variable separated chart
        assert op.spec.space == ("r", "rho")


def test_pipeline_rejects_other_parities():
    with pytest.raises(ValueError):
        derive_h_pipeline(2)


def test_h_relates_to_separated_form():
    res = relate_h_ha()
    assert res.passed, res.witnesses


def test_operators_are_polynomial_and_flag_invariant():
    for name, op in (("h_a", h_a()), ("l_a", l_a()), ("b_a", b_a()), ("c", c_op())):
        assert op.is_polynomial(), "%s must have polynomial coefficients" % name
        for n in (0, 1, 2, 3, 5):
            ok, witness = is_invariant(op, n)
            assert ok, "%s does not preserve level %d: %s" % (name, n, witness)


def test_operator_orders():
    assert h_a().order() == 2
    assert l_a().order() == 2
    assert b_a().order() == 4
    assert c_op().order() == 5


def test_integral_commutators():
    results = {res.check: res for res in verify_integrals()}
    assert set(results) == {"2d.comm.hl", "2d.comm.hb", "2d.comm.hc"}
    for res in results.values():
        assert res.passed, "%s: %s" % (res.check, res.witnesses)
    # the angular integral commutes identically in all parameters
    assert not any("modulo" in w for w in results["2d.comm.hl"].witnesses)
    # the other two hold on the two parity slices and the report says so
    for name in ("2d.comm.hb", "2d.comm.hc"):
        assert any("p^2 - p" in w for w in results[name].witnesses), (
            "%s must announce the parity quotient" % name
        )


def test_parity_slices_commute_exactly():
    h = h_a()
    for target in (b_a(), c_op()):
        residual = h.commutator(target)
        assert not residual.is_zero()
        assert idempotent_reduce_op(residual, ("p",)).is_zero()
        for parity in (0, 1):
            fixed = residual.substitute({"p": RU.const(parity)})
            assert fixed.is_zero(), "residual survives at parity %d" % parity


def test_c_order_and_leading_terms():
    c, results = compute_c_and_verify_leading()
    by_name = {res.check: res for res in results}
    assert by_name["2d.c.order"].passed
    assert by_name["2d.c.leading"].passed
    assert (c - b_a().commutator(l_a())).is_zero()


def test_cubic_closure_solves_and_printed_tables_differ():
    results, decs = verify_cubic()
    by_name = {res.check: res for res in results}
    for name in ("2d.cubic.l.solve", "2d.cubic.b.solve"):
        res = by_name[name]
        assert res.passed, "%s: %s" % (name, res.witnesses)
        assert any("full column rank" in w for w in res.witnesses), (
            "uniqueness of the quotient solution should be reported"
        )
    for name in ("2d.cubic.l.printed", "2d.cubic.b.printed"):
        res = by_name[name]
        assert not res.passed, "%s unexpectedly matched" % name
        assert res.residual_terms > 0
        assert res.witnesses, "per-term discrepancies must be listed"


def test_cubic_decompositions_rebuild_targets():
    _, decs = verify_cubic()
    assert set(decs) == {"l", "b"}
    for tag, dec in decs.items():
        assert dec.success
        assert dec.residual is not None and dec.residual.is_zero()
