"""Command-line interface: verification runs, exit codes, output formats,
operator inspection, and determinism."""

import json

from weylcalc.cli import main


def _json_lines(capsys):
    out = capsys.readouterr().out
    return json.loads(out)


def test_verify_passing_pattern_exits_zero(capsys):
    code = main(["verify", "2d.pipeline.*", "geom.det"])
    out = capsys.readouterr().out
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert len(lines) == 3
    assert all(l.startswith("PASS") for l in lines)


def test_verify_failing_pattern_exits_one(capsys):
    code = main(["verify", "g2.decompose.b.gl2"])
    out = capsys.readouterr().out
    assert code == 1
    assert out.startswith("FAIL")
    assert "provably infeasible" in out


def test_verify_unknown_pattern_exits_two(capsys):
    code = main(["verify", "nosuch.*"])
    err = capsys.readouterr().err
    assert code == 2
    assert "no checks match" in err


def test_verify_bad_param_exits_two(capsys):
    code = main(["verify", "geom.det", "--param", "beta=abc"])
    assert code == 2


def test_verify_json_and_text_agree(capsys):
    code = main(["verify", "geom.*", "--format", "json"])
    payload = _json_lines(capsys)
    assert code == 0
    json_status = {entry["check"]: entry["status"] for entry in payload}

    code = main(["verify", "geom.*"])
    out = capsys.readouterr().out
    text_status = {}
    for line in out.splitlines():
        if line.startswith(("PASS", "FAIL", "ERROR")):
            word, name = line.split()[:2]
            text_status[name] = word.lower()
    assert code == 0
    assert text_status == json_status
    assert set(json_status) == {
        "geom.cometric",
        "geom.det",
        "geom.curvature",
        "geom.curvature.sphere",
        "geom.schrodinger",
    }


def test_verify_output_is_deterministic(capsys):
    def snapshot():
        code = main(["verify", "2d.pipeline.*", "2d.algebraic", "--format", "json"])
        assert code == 0
        payload = _json_lines(capsys)
        for entry in payload:
            entry.pop("elapsed_ms")
        return payload

    assert snapshot() == snapshot()


def test_verify_parallel_matches_sequential(capsys):
    code = main(["verify", "2d.pipeline.*", "geom.*", "--format", "json"])
    seq = {e["check"]: e["status"] for e in _json_lines(capsys)}
    assert code == 0
    code = main(["verify", "2d.pipeline.*", "geom.*", "--format", "json", "--jobs", "2"])
    par = {e["check"]: e["status"] for e in _json_lines(capsys)}
    assert code == 0
    assert seq == par


def test_verify_param_override_reaches_checks(capsys):
    code = main(["verify", "2d.eigenbasis", "--param", "beta=3", "--param", "mu=1/2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "beta': '3'" in out or "beta" in out


def test_verify_param_collision_reports_error(capsys):
    code = main(["verify", "2d.eigenbasis", "--param", "beta=0"])
    out = capsys.readouterr().out
    assert code == 1
    assert out.startswith("ERROR")
    assert "collide" in out


def test_show_operator(capsys):
    code = main(["show", "B_x"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("#")
    assert lines[1] == (
        "1/2*x*D[x]^2 + y*D[x]*D[y] + z*D[x]*D[z] + (-1/2*x)*D[y]^2"
        " + (-1/2*x)*D[z]^2 + D[x] + x*E"
    )


def test_show_unknown_operator_exits_two(capsys):
    code = main(["show", "nope"])
    assert code == 2
    assert "unknown operator" in capsys.readouterr().err


def test_matrix_output(capsys):
    code = main(["matrix", "h_a", "1"])
    payload = _json_lines(capsys)
    assert code == 0
    assert payload["operator"] == "h_a"
    assert payload["n"] == 1
    assert payload["dim"] == 2
    assert payload["basis"] == ["1", "r"]
    assert payload["entries"] == [
        ["beta*mu + beta*p + beta", "-mu - p - 1"],
        ["0", "beta*mu + beta*p + 2*beta"],
    ]


def test_matrix_rejects_wrong_chart(capsys):
    code = main(["matrix", "B_x", "2"])
    assert code == 2


def test_decompose_command(capsys):
    code = main(["decompose", "l_a"])
    payload = _json_lines(capsys)
    assert code == 0
    assert payload["success"] is True
    assert payload["coefficients"]["J3*R2"] == "1"
    assert payload["coefficients"]["R2"] == "2*mu + 2"


def test_decompose_lowering_subset_fails_for_b(capsys):
    code = main(["decompose", "b_a", "--subset", "lowering"])
    payload = _json_lines(capsys)
    assert code == 1
    assert payload["success"] is False


def test_parse_command(capsys):
    code = main(["parse", "D[r]*r - r*D[r]"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.strip() == "1"
    code = main(["parse", "D[q]"])
    err = capsys.readouterr().err
    assert code == 2
    assert "unknown symbol" in err


def test_usage_errors(capsys):
    assert main([]) == 2
    capsys.readouterr()
    assert main(["verify"]) == 2
    capsys.readouterr()
    assert main(["bogus"]) == 2
