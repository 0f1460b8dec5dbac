"""Acceptance gate: nine criteria, one line of output each.

Every criterion is exact (zero residual) and carries a wall-clock budget.
Two criteria assert statements that the computations show to be false:

* criterion 3 asserts the order-4 and order-5 integrals commute with the
  Hamiltonian for a fully symbolic parity parameter; the residuals are
  nonzero multiples of p^2 - p and vanish only on the parity slices
  p = 0 and p = 1.
* criterion 8 asserts the order-4 integral and the order-5 commutator
  decompose over the eight first-order generators within degree bound 4;
  a weight-counting argument shows no degree bound admits such a
  decomposition, while the full eleven-generator set succeeds at degree 4.

Both are asserted as stated so the failures (and their witnesses) are part
of the recorded output rather than silently weakened.
"""

import time

from weylcalc import registry
from weylcalc.coulomb2d import b_a, c_op, h_a, l_a
from weylcalc.linsolve import idempotent_reduce_op
from weylcalc.reports import witness_terms
from weylcalc.spaces import RU


def _run(patterns):
    t0 = time.monotonic()
    results = registry.run_checks(registry.expand(patterns))
    return results, time.monotonic() - t0


def _line(num, ok, text, elapsed, budget):
    print(
        "[ACCEPTANCE %d] %s %s (%.1f s, budget %d s)"
        % (num, "PASS" if ok else "FAIL", text, elapsed, budget)
    )


def _failures(results):
    return [r for r in results if not r.passed]


def test_criterion_1_three_dimensional_identities():
    results, dt = _run(["3d.*"])
    bad = _failures(results)
    ok = not bad and dt < 30
    _line(1, ok, "3D identity suite: %d checks, all residuals empty" % len(results), dt, 30)
    assert len(results) == 18
    assert not bad, "failed: %s" % [(r.check, r.witnesses) for r in bad]
    assert dt < 30, "suite took %.1f s" % dt


def test_criterion_2_pipeline():
    results, dt = _run(["2d.pipeline.p0", "2d.pipeline.p1", "2d.algebraic"])
    bad = _failures(results)
    ok = not bad and dt < 10
    _line(2, ok, "derivation pipeline (both parities) and separated form", dt, 10)
    assert not bad, "failed: %s" % [(r.check, r.witnesses) for r in bad]
    assert dt < 10, "pipeline took %.1f s" % dt


def test_criterion_3_strict_symbolic_integrability():
    t0 = time.monotonic()
    h = h_a()
    residuals = {
        "l_a": h.commutator(l_a()),
        "b_a": h.commutator(b_a()),
        "c": h.commutator(c_op()),
    }
    dt = time.monotonic() - t0
    bad = {k: v for k, v in residuals.items() if not v.is_zero()}
    ok = not bad and dt < 30
    _line(
        3,
        ok,
        "strict symbolic commutation of all three integrals"
        + ("" if ok else "; nonzero: %s" % sorted(bad)),
        dt,
        30,
    )
    detail = []
    for name, res in bad.items():
        slice_ok = idempotent_reduce_op(res, ("p",)).is_zero() and all(
            res.substitute({"p": RU.const(v)}).is_zero() for v in (0, 1)
        )
        detail.append(
            "[h_a, %s] has %d residual terms, e.g. %s; the residual is a "
            "multiple of p^2 - p and vanishes on both parity slices (%s)"
            % (name, len(res.terms), "; ".join(witness_terms(res, 2)), slice_ok)
        )
    assert not bad, (
        "strict commutation with symbolic parity fails exactly where the "
        "parity parameter enters quadratically:\n  " + "\n  ".join(detail)
    )
    assert dt < 30


def test_criterion_4_commutator_leading_terms():
    results, dt = _run(["2d.c.order", "2d.c.leading"])
    bad = _failures(results)
    ok = not bad
    _line(4, ok, "order-5 commutator: order and displayed leading terms", dt, 30)
    assert not bad, "failed: %s" % [(r.check, r.witnesses) for r in bad]


def test_criterion_5_cubic_closure():
    results, dt = _run(["2d.cubic.*"])
    by_name = {r.check: r for r in results}
    solved = [by_name["2d.cubic.l.solve"], by_name["2d.cubic.b.solve"]]
    printed = [by_name["2d.cubic.l.printed"], by_name["2d.cubic.b.printed"]]
    ok = all(r.passed for r in solved) and dt < 300
    agree = sum(r.passed for r in printed)
    _line(
        5,
        ok,
        "cubic closure solved exactly; displayed tables: %d of 2 agree, "
        "per-term discrepancies reported" % agree,
        dt,
        300,
    )
    for r in solved:
        assert r.passed, "%s: %s" % (r.check, r.witnesses)
    for r in printed:
        assert r.witnesses, "%s must report agreement or per-term discrepancy" % r.check
    assert dt < 300, "cubic closure took %.1f s" % dt


def test_criterion_6_spectrum():
    results, dt = _run(["2d.spectrum", "2d.eigenbasis"])
    bad = _failures(results)
    ok = not bad and dt < 60
    _line(6, ok, "characteristic polynomials and eigenbasis dimensions, n = 0..8", dt, 60)
    assert not bad, "failed: %s" % [(r.check, r.witnesses) for r in bad]
    assert dt < 60, "spectrum suite took %.1f s" % dt


def test_criterion_7_geometry():
    results, dt = _run(["geom.*"])
    bad = _failures(results)
    ok = not bad and dt < 10
    _line(7, ok, "determinant, scalar curvature, and conjugated separation form", dt, 10)
    assert len(results) == 5
    assert not bad, "failed: %s" % [(r.check, r.witnesses) for r in bad]
    assert dt < 10, "geometry suite took %.1f s" % dt


def test_criterion_8_hidden_algebra_membership():
    results, dt = _run(
        ["g2.lieform.*", "g2.flag", "g2.decompose.b.gl2", "g2.decompose.c.gl2"]
    )
    by_name = {r.check: r for r in results}
    context, _ = _run(["g2.decompose.b", "g2.decompose.c"])
    bad = _failures(results)
    ok = not bad and dt < 300
    _line(
        8,
        ok,
        "quadratic rewrites and flag action hold; first-order-subset "
        "decomposition of the higher integrals %s (full eleven-generator set: %s)"
        % (
            "succeeds" if ok else "is infeasible",
            "succeeds" if all(r.passed for r in context) else "fails",
        ),
        dt,
        300,
    )
    for name in ("g2.lieform.h", "g2.lieform.l", "g2.flag"):
        assert by_name[name].passed, by_name[name].witnesses
    detail = []
    for r in bad:
        detail.append("%s: %s" % (r.check, " | ".join(r.witnesses)))
    assert not bad, (
        "the first-order generator subset cannot reach the higher integrals "
        "at any degree bound; the eleven-generator set reaches both at "
        "degree 4:\n  " + "\n  ".join(detail)
    )
    assert dt < 300


def test_criterion_9_property_suites():
    import test_exprparse
    import test_flagrep
    import test_weyl

    t0 = time.monotonic()
    test_weyl.test_commutator_jacobi()
    test_weyl.test_compose_associative()
    test_weyl.test_conjugation_homomorphism()
    test_flagrep.test_equality_oracle_agrees_with_term_maps()
    test_exprparse.test_round_trip_is_canonical_for_all_named_operators()

    def snapshot():
        results = registry.run_checks(
            registry.expand(["2d.pipeline.*", "2d.algebraic", "geom.*"])
        )
        rows = []
        for r in sorted(results, key=lambda x: x.check):
            d = r.to_dict()
            d.pop("elapsed_ms")
            rows.append(d)
        return rows

    deterministic = snapshot() == snapshot()
    dt = time.monotonic() - t0
    _line(
        9,
        deterministic,
        "randomized algebra laws (3 x 1000 cases), oracle agreement (1000 pairs), "
        "round trips, and repeat-run determinism",
        dt,
        120,
    )
    assert deterministic, "verification output changed between identical runs"
