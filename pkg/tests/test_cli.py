import io
import json
from pathlib import Path

from rsg.cli import run_command

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = run_command([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_word_nicefact(capsys):
    code, out, _ = run(capsys, "word", "nicefact", "aBa")
    assert code == 0 and out.strip() == "a b⁻¹ a"


def test_word_reduce_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("aAb\nabBA\n"))
    code, out, _ = run(capsys, "word", "reduce")
    assert code == 0 and out.split() == ["b", "ε"]


def test_word_abelian_nf(capsys):
    code, out, _ = run(capsys, "word", "abelian-nf", "x^2 y^-3")
    assert out.strip() == "(y^3)^-1 x^2"


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "word", "reduce", "a{b")
    assert code == 2 and "position 1" in err


def test_unknown_subcommand(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_tree_dot(capsys):
    code, out, _ = run(capsys, "tree", "dot", "{ε,a,ab}")
    assert code == 0 and out.startswith("digraph tree {") and '"a" -> "ab"' in out


def test_alg_check_pass_and_fail(capsys, tmp_path):
    code, out, _ = run(capsys, "alg", "check", DATA / "i2.json")
    assert code == 0 and "FAIL" not in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"names": ["1", "e"], "mul": [0, 1, 1, 1], "plus": [1, 1], "star": [0, 1]}))
    code, out, _ = run(capsys, "alg", "check", bad, "--json")
    assert code == 1 and json.loads(out)["ok"] is False


def test_alg_closure_and_quotient(capsys):
    code, out, _ = run(capsys, "alg", "closure", DATA / "chain3.json", "--pairs", "e1=e2", "--json")
    assert json.loads(out)["blocks"] == [["1"], ["e1", "e2"]]
    code, out, _ = run(capsys, "alg", "quotient", DATA / "chain3.json", "--pairs", "e1=e2")
    q = json.loads(out)
    assert code == 0 and q["names"] == ["1", "{e1,e2}"]


def test_sd_commands(capsys):
    assert run(capsys, "sd", "mul", "({ε,a},a)", "({ε,a},a)")[1].strip() == "({ε,a,aa}, aa)"
    assert run(capsys, "sd", "star", "({ε,a},a)")[1].strip() == "({ε,A}, ε)"
    assert run(capsys, "sd", "inR", "({ε},a)")[1].strip() == "false"
    assert run(capsys, "sd", "down", "({a,ab},b)")[1].strip() == "({ε,a,b,ab}, b)"
    assert run(capsys, "sd", "mul", "({ε,A},A)", "({ε},ε)")[0] == 2
    assert run(capsys, "sd", "mul", "({ε,A},A)", "({ε},ε)", "--group")[0] == 0


def test_fr_commands(capsys):
    assert run(capsys, "fr", "decompose", "({ε,a,aB},ε)")[1].strip() == "(a·(b)*)⁺"
    code, out, _ = run(capsys, "fr", "eval", "({ε,a,ab},a)", "--target", DATA / "chain2.json", "--map", "a=1,b=e1")
    assert code == 0 and out.strip() == "e1"
    code, _, err = run(capsys, "fr", "eval", "({ε,a,ab},a)", "--target", DATA / "chain2.json", "--map", "a=1")
    assert code == 2 and "b" in err


def test_term_commands(capsys):
    code, out, _ = run(capsys, "term", "yuck", "--U", "{ε,a}", "--V", "{ε,b}", "--g", "aBa", "--variant", "*", "--json")
    data = json.loads(out)
    assert code == 0 and data["all_in_R"] and data["term"].endswith("^+")
    code, out, _ = run(capsys, "term", "two", "yxz", "--consts", "({a,ab},b)", "({ε},ε)", "--json")
    assert json.loads(out)["constants"] == ["({ε,a,b,ab}, b)", "({ε}, ε)"]
    code, out, _ = run(capsys, "term", "onedir", "tower:0+", "--consts", "({ε,b},a)", "({a},ab)", "--group")
    assert "U = {ε,b}" in out and "g = a" in out
    assert run(capsys, "term", "eval", "tower:0+", "--consts", "({ε},ε)", "({ε},ε)", "--c", "({ε,a},a)")[1].strip().endswith("= ({ε,a}, ε)")


def test_chain_from_file_and_random(capsys):
    code, out, _ = run(capsys, "chain", "--input", DATA / "chain_example.json")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "chain", "--count", 5, "--seed", 1, "--json")
    assert code == 0 and all(c["ok"] for c in json.loads(out)["chains"])


def test_cover_build_reports_stabilized(capsys):
    code, out, _ = run(capsys, "cover", "build", "--input", DATA / "chain2.json", "--bound", 4, "--json")
    rep = json.loads(out)
    assert code == 0 and rep["stabilized"] is True and all(rep["checks"].values())


def test_cover_rejects_invalid_algebra(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mul": [0, 1, 1, 0], "plus": [1, 1], "star": [0, 0]}))
    assert run(capsys, "cover", "build", "--input", bad)[0] == 2


def test_pact_commands(capsys):
    code, out, _ = run(capsys, "pact", "check", DATA / "pact_chain.json")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = run(capsys, "pact", "meet", DATA / "pact_chain.json", "--x", "1,ε", "--y", "1,a")
    assert out.strip() == "[e, ε]"
    code, out, _ = run(capsys, "pact", "nice", DATA / "pact_diamond.json", "--max-len", 3)
    assert code == 0


def test_verify_lemma_two(capsys):
    code, out, _ = run(capsys, "verify", "lemma-two", "--omega", 2, "--samples", 50, "--seed", 7)
    assert code == 0 and out.startswith("PASS lemma-two")


def test_json_output_is_deterministic(capsys):
    argv = ["verify", "main1", "--seed", 3, "--chains", 40, "--json"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert json.loads(first)["ok"] is True
