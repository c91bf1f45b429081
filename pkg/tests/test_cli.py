import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from qcluster.cli import main, seed_document
from qcluster.cyclotomic import CycRat
from qcluster.demo import a2_elements
from qcluster.expr import ParseError, parse_element
from qcluster.seed import a2_seed
from qcluster.torus import Bicharacter, TorusElement, monomial

from conftest import random_element, random_skew

LAM3 = Bicharacter.from_matrix([[0, 1], [-1, 0]], 3)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_examples():
    assert parse_element("x1^-1 + z*x1^-1*x2", LAM3) == a2_elements(3)["Y1"]
    assert parse_element("1", LAM3) == TorusElement.one(LAM3)
    assert parse_element("x2*x1", LAM3) == monomial(LAM3, (1, 1), LAM3.ctx.zeta(-1))
    half = CycRat.from_int(LAM3.ctx, 1) / 2
    lhs = parse_element("(1 + z)/2*x1^2 - 3", LAM3)
    assert lhs == monomial(LAM3, (2, 0), (LAM3.ctx.zeta(0) + LAM3.ctx.zeta(1))).scale(half) - 3


@pytest.mark.parametrize("text", ["x3", "x1^", "x1 +", "y1", "x1^1.5", "(x1"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_element(text, LAM3)


def test_print_parse_round_trip():
    rng = random.Random(12)
    for ell in (3, 4, 5, 6):
        for n in (1, 2, 3):
            lam = Bicharacter.from_matrix(random_skew(n, ell, rng), ell)
            for _ in range(15):
                a = random_element(lam, rng, terms=4)
                z = lam.ctx.zeta(rng.randrange(ell))
                a = a.scale(z) + a.scale(Fraction(1, rng.randint(1, 4)))
                text = str(a)
                b = parse_element(text, lam)
                assert b == a
                assert str(b) == text


def test_a2_demo(capsys):
    for ell in ("3", "5"):
        code, out, _ = run(capsys, "a2-demo", "--ell", ell)
        assert code == 0 and "FAIL" not in out
        assert out.count("[PASS]") == 10


def test_a2_demo_even_ell(capsys):
    code, out, _ = run(capsys, "a2-demo", "--ell", "4")
    assert code == 0 and "SKIP" in out and "FAIL" not in out


def test_mutate_involution(capsys):
    code, out, _ = run(capsys, "mutate", "--word", "1,1")
    doc = json.loads(out)
    assert code == 0 and doc["frame"] == ["x1", "x2"] and doc["path"] == [1, 1]
    code, out, _ = run(capsys, "mutate", "--word", "1")
    assert json.loads(out)["frame"][0] == "x1^-1 + z*x1^-1*x2"


def test_graph(capsys):
    code, out, _ = run(capsys, "graph", "--mode", "unlabelled")
    assert code == 0 and out.startswith("graph exchange {")
    assert out.count("--") == 5 and out.count("[label=") == 10
    code, out, _ = run(capsys, "graph", "--mode", "labelled", "--format", "json")
    doc = json.loads(out)
    assert len(doc["vertices"]) == 10


def test_member(capsys):
    code, out, _ = run(capsys, "member", "--element", "x1^-1 + z*x1^-1*x2")
    doc = json.loads(out)
    assert code == 0 and doc["member"] and doc["theta_connected"]
    code, out, _ = run(capsys, "member", "--element", "x1^-1")
    doc = json.loads(out)
    assert not doc["member"]
    bad = [s for s in doc["seeds"] if not s["ok"]]
    assert bad[0]["certificate"]["seed_path"] == [1]
    code, out, _ = run(capsys, "member", "--element", "x1^3", "--theta", "root;1,2,1")
    doc = json.loads(out)
    assert doc["member"] and doc["central_subalgebra"] and not doc["theta_connected"]


def test_trace_and_ch(capsys):
    code, out, _ = run(capsys, "trace", "--element", "x1^3 + x2", "--kind", "reduced")
    assert json.loads(out)["trace"] == "3*x1^3"
    code, out, _ = run(capsys, "ch-check", "--element", "x1 + x2", "--matrix-check")
    doc = json.loads(out)
    assert code == 0 and doc["is_zero"] and doc["matrix_check"]
    code, out, _ = run(capsys, "ch-check", "--element", "x1 + x2", "--degree", "2")
    assert code == 1 and not json.loads(out)["is_zero"]
    code, out, _ = run(capsys, "ch-check", "--element", "x1 + x2^2", "--kind", "regular", "--word", "2")
    assert code == 0


def test_classify_monoid(capsys):
    code, out, _ = run(capsys, "classify-monoid", "--gens", "4,0;3,1;1,3;0,4", "--ell", "3")
    doc = json.loads(out)
    assert doc["certificate"]["witness"] == [2, 2] and not doc["maximal_order"]
    assert doc["ch_degree_a2_lambda"] == 3
    code, out, _ = run(capsys, "classify-monoid", "--ineq", "x1>=0", "--ineq", "x2>=0")
    assert json.loads(out)["maximal_order"]
    code, out, _ = run(capsys, "classify-monoid", "--ineq", "x1>0", "--rank", "2")
    doc = json.loads(out)
    assert doc["integrally_convex"] and not doc["integrally_closed"]


def test_errors(capsys):
    code, _, err = run(capsys, "member", "--element", "x3")
    assert code == 2 and json.loads(err)["error"] == "ParseError"
    code, _, err = run(capsys, "trace", "--element", "x1^-1", "--word", "1")
    doc = json.loads(err)
    assert code == 2 and doc["error"] == "NotMember" and doc["certificate"]["seed_path"] == [1]
    code, _, err = run(capsys, "mutate", "--seed-file", "/nonexistent.json")
    assert code == 2
    code, _, err = run(capsys, "classify-monoid")
    assert code == 2
    code, _, err = run(capsys, "mutate", "--word", "3")
    assert code == 2


def test_seed_file_and_out(tmp_path, capsys):
    doc = seed_document(a2_seed(5))
    path = tmp_path / "seed.json"
    path.write_text(json.dumps(doc))
    out_path = tmp_path / "res.json"
    code, out, _ = run(capsys, "mutate", "--seed-file", str(path), "--word", "2", "--out", str(out_path))
    res = json.loads(out_path.read_text())
    assert code == 0 and out == "" and res["ell"] == 5
    assert res["frame"][1] == str(a2_seed(5).frame[1] ** -1 + parse_element("z^-1*x2^-1*x1", a2_seed(5).lam))
    code, _, err = run(capsys, "mutate", "--seed-file", str(path), "--ell", "3")
    assert code == 2 and "conflicts" in json.loads(err)["message"]


def test_frozen_seed_file(tmp_path, capsys):
    doc = {"ell": 3, "n": 2, "ex": [1], "inv": [], "btilde": [[0], [1]], "lambda": [[0, -1], [1, 0]], "d": [1]}
    path = tmp_path / "frozen.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "member", "--seed-file", str(path), "--element", "x2^-1")
    res = json.loads(out)
    assert code == 0 and not res["member"]
    assert res["seeds"][0]["reason"] == "negative_frozen_exponent"


def test_deterministic(capsys):
    outs = set()
    for _ in range(2):
        _, out, _ = run(capsys, "graph", "--mode", "labelled", "--rng-seed", "5")
        outs.add(out)
    assert len(outs) == 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "qcluster.cli", "a2-demo", "--ell", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and "A2 checks at ell = 3" in res.stdout
