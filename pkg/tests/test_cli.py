import json
import subprocess
import sys

import pytest

from thompsonf.cli import main

SYSTEM = "A + B = C\nA * B = D\nC = 5\nD = 6\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def poly(tmp_path):
    p = tmp_path / "sys.poly"
    p.write_text(SYSTEM)
    return p


def test_pipeline(capsys, tmp_path, poly):
    geq, vmap, w = tmp_path / "sys.geq", tmp_path / "map.json", tmp_path / "w.json"
    assert run(capsys, "reduce", "--mode", "germ", "-i", str(poly), "-o", str(geq), "--map", str(vmap))[0] == 0
    assert run(capsys, "witness", "-i", str(poly), "--mode", "germ", "--assign", "A=2,B=3", "-o", str(w))[0] == 0
    code, out, _ = run(capsys, "verify", "-s", str(geq), "-a", str(w))
    assert code == 0 and out.strip() == "satisfied"
    code, out, _ = run(capsys, "decode", "-a", str(w), "--map", str(vmap))
    assert code == 0 and out.strip() == "A=2 B=3 C=5 D=6"


def test_verify_fails_on_wrong_assignment(capsys, tmp_path, poly):
    geq, w = tmp_path / "sys.geq", tmp_path / "w.json"
    run(capsys, "reduce", "-i", str(poly), "-o", str(geq))
    run(capsys, "witness", "-i", str(poly), "--assign", "A=2,B=3", "-o", str(w))
    a = json.loads(w.read_text())
    a["A"] = {"word": "x1"}
    w.write_text(json.dumps(a))
    assert run(capsys, "verify", "-s", str(geq), "-a", str(w))[0] == 1


def test_witness_not_a_solution(capsys, poly):
    assert run(capsys, "witness", "-i", str(poly), "--assign", "A=2,B=2")[0] == 3


def test_decode_not_in_image(capsys, tmp_path, poly):
    vmap, w = tmp_path / "map.json", tmp_path / "w.json"
    run(capsys, "reduce", "-i", str(poly), "-o", str(tmp_path / "x.geq"), "--map", str(vmap))
    w.write_text(json.dumps({v: {"word": "x1"} for v in "ABCD"}))
    assert run(capsys, "decode", "-a", str(w), "--map", str(vmap))[0] == 5


def test_paper_mode_miss_exit_code(capsys, tmp_path):
    p = tmp_path / "p.poly"
    p.write_text("A * B = C\n")
    code = run(capsys, "witness", "-i", str(p), "--mode", "paper", "--assign", "A=3,B=4",
               "--search-radius", "1")[0]
    assert code == 4


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "bad.poly"
    p.write_text("X - 1 = 0\n")
    code, _, err = run(capsys, "reduce", "-i", str(p))
    assert code == 2 and "line 1" in err and "column 3" in err
    g = tmp_path / "bad.geq"
    g.write_text("$X x2 = 1\n")
    w = tmp_path / "w.json"
    w.write_text("{}")
    assert run(capsys, "verify", "-s", str(g), "-a", str(w))[0] == 2
    assert run(capsys, "witness", "-i", str(tmp_path / "bad.poly"), "--assign", "X=oops")[0] == 2


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "id")
    assert code == 0
    assert "breakpoints: (0/2^0, 0/2^0) (1/2^0, 1/2^0)" in out
    assert "support: {}" in out and "abelianise: 0 0" in out
    _, out, _ = run(capsys, "eval", "x1")
    assert "support: (1/2^1, 1/2^0)" in out
    assert run(capsys, "eval", "x7")[0] == 2


def test_centralise(capsys):
    code, out, _ = run(capsys, "centralise", "x1")
    assert code == 0
    assert out.splitlines() == ["[0/2^0, 1/2^1] FixedPointwise", "[1/2^1, 1/2^0] SupportDense"]


def test_ball(capsys):
    assert run(capsys, "ball", "--radius", "3", "--count")[1].strip() == "53"
    assert run(capsys, "ball", "--radius", "1")[1].split("\n")[0] == "id"


def test_solve(capsys, tmp_path):
    g = tmp_path / "c.geq"
    g.write_text("$X x0 $X^-1 x0^-1 = 1\n")
    code, out, _ = run(capsys, "solve", "-s", str(g), "--radius", "2", "--all")
    assert code == 0
    assert out.splitlines() == ["X=id", "X=x0", "X=x0^-1", "X=x0 x0", "X=x0^-1 x0^-1"]
    g.write_text("$X $X = x0\n")
    assert run(capsys, "solve", "-s", str(g), "--radius", "2")[1].strip() == "none found within radius"


def test_solve_with_fixed(capsys, tmp_path):
    g = tmp_path / "c.geq"
    g.write_text("$X $Y = x0 x1\n")
    f = tmp_path / "fixed.json"
    f.write_text(json.dumps({"Y": {"word": "x1"}}))
    code, out, _ = run(capsys, "solve", "-s", str(g), "--radius", "2", "--vars", "X", "--fixed", str(f))
    assert code == 0 and out.strip() == "X=x0"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "thompsonf", "ball", "--radius", "2", "--count"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "17"


def test_help_lists_grammars(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "grammars" in capsys.readouterr().out
