import json

import pytest

from ofl.cli import main
from ofl.semantics import Structure
from ofl.syntax import dumps_term_file, parse_term
from ofl.terms import Vocabulary

V = Vocabulary({"P": 1, "R": 2})


@pytest.fixture
def run(capsys):
    def go(*argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err
    return go


def _termfile(tmp_path, text, vocab=V, name="t.term"):
    p = tmp_path / name
    p.write_text(dumps_term_file(parse_term(text, vocab), vocab))
    return str(p)


def test_parse_and_json(run):
    code, out, _ = run("parse", "-e", "all (not P cup ex R)", "--vocab", "P/1, R/2")
    assert code == 0 and "# arity 0" in out
    code, out, _ = run("parse", "--json", "-e", "ex s R", "--vocab", "R/2")
    d = json.loads(out)
    assert d["schema"] == 1 and d["command"] == "parse" and d["arity"] == 1


def test_classify(run):
    code, out, _ = run("classify", "-e", "all ex C(S, not Z)", "--vocab", "S/2, Z/1")
    assert code == 0 and "status:" in out
    code, out, _ = run("classify", "--json", "-e", "ex ex (s R cap E R cap C(R, P))", "--vocab", "P/1, R/2")
    assert json.loads(out)["status"] == "open"


def test_sat_exit_codes(run, tmp_path):
    cert = tmp_path / "m.json"
    code, out, _ = run("sat", "-e", "all ex (R cap not E R)", "--vocab", "R/2", "--certify", str(cert), "--trace")
    assert code == 0 and out.startswith("guess ") and "SAT (size" in out
    A = Structure.load(cert, V)
    assert A.n >= 2
    code, out, _ = run("sat", "-e", "ex ex (R cap not R)", "--vocab", "R/2")
    assert code == 1 and "UNSAT" in out
    code, out, _ = run("sat", "-e", "ex ex (R cap not R)", "--vocab", "R/2", "--solver", "oracle",
                       "--max-size", "2")
    assert code == 2 and "UNKNOWN" in out


def test_sat_json_model(run):
    code, out, _ = run("sat", "--json", "-e", "ex0 P cap all0 (not P cup ex1 R)", "--vocab", "P/1, R/2")
    d = json.loads(out)
    assert code == 0 and d["status"] == "SAT" and d["stats"]["solver"] == "onedim"
    assert d["model"]["domain"] >= 1


def test_usage_and_input_errors(run, tmp_path):
    assert run("sat", "-e", "ex R")[0] == 3                        # missing --vocab
    assert run("sat", "-e", "ex R", "--vocab", "R/2")[0] == 3      # not a sentence
    assert run("sat", "--solver", "ordered", "-e", "ex ex s R", "--vocab", "R/2")[0] == 3
    with pytest.raises(SystemExit) as e:
        main(["sat", "--solver", "nope"])
    assert e.value.code == 3
    code, _, err = run("parse", "-e", "ex (R", "--vocab", "R/2")
    assert code == 4 and "position" in err
    assert run("parse", str(tmp_path / "missing.term"))[0] == 4


def test_eval_and_certify(run, tmp_path):
    t = _termfile(tmp_path, "ex R")
    s = tmp_path / "a.json"
    s.write_text(Structure.from_tuples(2, {"R": [(0, 1)]}, V).dumps())
    code, out, _ = run("eval", t, "-s", str(s))
    assert code == 0 and out.splitlines()[1:] == ["0"]
    sent = _termfile(tmp_path, "all ex R", name="s.term")
    code, out, _ = run("certify", sent, "-m", str(s))
    assert code == 1 and "INVALID" in out
    s.write_text(Structure.from_tuples(2, {"R": [(0, 1), (1, 1)]}, V).dumps())
    assert run("certify", sent, "-m", str(s))[0] == 0


def test_nf_headers(run, tmp_path):
    code, out, _ = run("nf", "-e", "ex ex R", "--vocab", "R/2")
    assert code == 0 and out.startswith("# branch 1/1 (ordered")


@pytest.mark.parametrize("argv", [
    ["translate", "modal", "-e", "and dia p box not q"],
    ["translate", "s52", "-e", "dia1 p"],
    ["translate", "ol", "-e", "∃v₁P(v₁)"],
    ["translate", "tiling", "-e", '[{"r": 0, "l": 0, "t": 0, "b": 0}]'],
    ["translate", "grid"],
    ["translate", "infinity", "--c-free"],
])
def test_translate(run, tmp_path, argv):
    code, out, _ = run(*argv)
    assert code == 0
    p = tmp_path / "out.term"
    p.write_text(out)
    assert run("parse", str(p))[0] == 0


def test_translate_errors(run):
    assert run("translate", "modal")[0] == 3
    assert run("translate", "ol", "-e", "∃v1∃v2 R(v2, v1)")[0] == 4


def test_fuzz_figures_and_seed(run, tmp_path, monkeypatch):
    figs = tmp_path / "figs"
    rep = tmp_path / "rep.json"
    code, out, _ = run("fuzz", "--count", "8", "--laws", "30", "--figures", str(figs), "--report", str(rep))
    assert code == 0 and "result: ok" in out
    assert {p.name for p in figs.glob("*.png")} == {"verdicts.png", "sizes.png", "times.png"}
    assert json.loads(rep.read_text())["seed"] == 0
    monkeypatch.setenv("OFL_SEED", "17")
    code, out, _ = run("fuzz", "--json", "--count", "3", "--laws", "5", "--seed", "2")
    assert json.loads(out)["seed"] == 17
