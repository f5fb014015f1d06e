import json

import pytest

from lassynt.cli import bundled_specs, main, resolve_spec, EXIT_FILE, EXIT_USAGE
from lassynt.ltl import parse_ltl, parse_spec, to_nnf, to_string
from lassynt.qbf import parse_qdimacs, solve_qbf


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bundled_specs_parse_and_round_trip():
    texts = bundled_specs()
    assert {"greedy1", "greedy2", "greedy3", "rr2", "simple"} <= set(texts)
    for name, text in texts.items():
        spec = parse_spec(text, name)
        to_nnf(spec.formula)
        assert parse_ltl(to_string(spec.formula)) == spec.formula


def test_rr2_alphabet_and_greedy2_shape():
    rr = resolve_spec("rr2")
    assert rr.inputs == ["w"] and rr.outputs == ["g1", "g2"]
    g2 = resolve_spec("examples/greedy2.spec")
    expected = parse_ltl("G(!(g1 & g2)) & G((r1 -> F g1) & (r2 -> F g2)) & "
                         "G(((g1 & r1 & F !r1) -> X g1) & ((g2 & r2 & F !r2) -> X g2))")
    assert g2.formula == expected


def test_synth_json(capsys):
    code, out, _ = run(capsys, "synth", "--spec", "examples/greedy1.spec", "-n", "2", "-k", "2")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "realizable" and data["witness"]["states"] == 2


def test_synth_unrealizable_and_text(capsys):
    code, out, _ = run(capsys, "synth", "--spec", "rr2", "-n", "3", "-k", "2", "--format", "text")
    assert code == 1 and "unrealizable" in out


def test_synth_resource_exit(capsys):
    code, out, _ = run(capsys, "synth", "--spec", "rr2", "-n", "3", "-k", "2", "--max-refinements", "0")
    assert code == 2 and json.loads(out)["verdict"] == "resource-limit"


def test_sweep(capsys):
    code, out, _ = run(capsys, "synth", "--spec", "rr2", "-k", "2", "--sweep-n", "4")
    assert code == 0 and json.loads(out)["n"] == 4


def test_usage_and_file_errors(capsys, tmp_path):
    assert run(capsys, "synth", "-n", "1", "-k", "1")[0] == EXIT_USAGE
    assert run(capsys, "synth", "--spec", "rr2", "-n", "0", "-k", "1")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as ei:
        main(["frobnicate"])
    assert ei.value.code == EXIT_USAGE
    assert run(capsys, "synth", "--spec", str(tmp_path / "none.spec"), "-n", "1", "-k", "1")[0] == EXIT_FILE
    bad = tmp_path / "bad.spec"
    bad.write_text("[inputs] r\n[outputs] g\n[ltl] G(r -> F q)\n")
    code, _, err = run(capsys, "synth", "--spec", str(bad), "-n", "1", "-k", "1")
    assert code == 3 and "line 3" in err


def test_prefix_dfa_dot(capsys):
    code, out, _ = run(capsys, "prefix-dfa", "-I", "r", "-k", "3", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    code, out, _ = run(capsys, "prefix-dfa", "-I", "r,w", "-k", "1", "--minimize", "--format", "json")
    assert json.loads(out)["states"] == 6


def test_emit_qdimacs(capsys, tmp_path):
    f = tmp_path / "f.qdimacs"
    code, _, _ = run(capsys, "emit-qdimacs", "--spec", "examples/rr2.spec", "-n", "4", "-k", "2", "--out", str(f))
    assert code == 0
    p = parse_qdimacs(f.read_text())
    assert [q for q, _ in p.prefix] == ["e", "a", "e"] and p.core is not None
    g = tmp_path / "g.qdimacs"
    assert run(capsys, "emit-qdimacs", "--spec", "greedy1", "-n", "2", "-k", "2", "--out", str(g))[0] == 0
    assert solve_qbf(parse_qdimacs(g.read_text())).status == "sat"


def test_emit_count(capsys, tmp_path):
    f = tmp_path / "c.cnf"
    assert run(capsys, "emit-count", "--spec", "greedy1", "-n", "2", "-k", "3", "--out", str(f))[0] == 0
    assert "c count" in f.read_text()
    code, out, _ = run(capsys, "approx", "--spec", "greedy1", "-n", "1", "-k", "2", "--method", "export",
                       "--out", str(tmp_path / "d.cnf"))
    assert code == 0 and "exported" in json.loads(out)


def test_check_and_approx(capsys, tmp_path):
    w = tmp_path / "w.json"
    code, _, _ = run(capsys, "synth", "--spec", "rr2", "-n", "4", "-k", "2", "--out", str(w))
    assert code == 0
    code, out, _ = run(capsys, "check", "--spec", "rr2", "-k", "2", "--system", str(w))
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "check", "--spec", "rr2", "-k", "5", "--system", str(w))
    data = json.loads(out)
    if code == 1:
        assert data["counterexample"].endswith(")^w")
    code, out, _ = run(capsys, "approx", "--spec", "simple", "-n", "1", "-k", "1", "--table")
    data = json.loads(out)
    assert code == 1 and data["rate_float"] < 1 and len(data["words"]) == 4


def test_repro_table_small_deterministic(capsys):
    code, out1, _ = run(capsys, "repro-table", "--small", "--format", "json")
    assert code == 0
    rows = json.loads(out1)
    assert any(r["verdict"] == "skipped-by-guard" for r in rows)
    code, out2, _ = run(capsys, "repro-table", "--small", "--format", "json")
    strip = lambda rs: [{k: v for k, v in r.items() if k != "time"} for r in rs]
    assert strip(json.loads(out2)) == strip(rows)
