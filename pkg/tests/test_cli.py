import io
import json
import subprocess
import sys

import pytest

from invlat.cli import main


def run(argv, stdin="", capsys=None, monkeypatch=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(capsys, monkeypatch):
    def call(*argv, stdin=""):
        return run(list(argv), stdin, capsys, monkeypatch)
    return call


def doc(cli, *argv):
    code, out, _ = cli("construct", *argv)
    assert code == 0
    return out


def test_construct_and_count(cli):
    b6 = doc(cli, "B6")
    assert cli("con", "--kind", "i", "--count-only", stdin=b6)[1] == "5\n"
    c7 = doc(cli, "chain", "7")
    assert cli("con", "--kind", "bz", "--count-only", stdin=c7)[1] == "5\n"
    assert cli("con", "--count-only", stdin=c7)[1] == "64\n"


def test_con_listing(cli):
    code, out, _ = cli("con", "--kind", "i", stdin=doc(cli, "B6"))
    lines = out.splitlines()
    assert lines[0] == "5" and lines[1].startswith("0: [[0,a,b,a',b',1]]")


def test_con0_con01(cli):
    c4 = doc(cli, "chain", "4")
    assert cli("con", "--kind", "con0", "--count-only", stdin=c4)[1] == "4\n"
    assert cli("con", "--kind", "con01", "--base", "i", "--count-only", stdin=c4)[1] == "2\n"


def test_validate_classify_si_atoms_narrows(cli):
    b6 = doc(cli, "B6")
    assert cli("validate", stdin=b6)[1] == "OK: i-lattice with 6 elements\n"
    assert "pseudo-Kleene" in cli("classify", stdin=b6)[1]
    assert cli("si", "--kind", "i", stdin=b6)[1] == "yes\n"
    assert cli("atoms", "--kind", "i", stdin=b6)[1] == "1\n[[0],[a,b'],[b,a'],[1]]\n"
    assert cli("narrows", stdin=b6)[1].splitlines() == ["a b'", "b a'"]


def test_quotient(cli, tmp_path):
    c5 = doc(cli, "chain", "5")
    out = tmp_path / "q.json"
    assert cli("quotient", "--kind", "i", "--by", "1", "-o", str(out), stdin=c5)[0] == 0
    assert len(json.loads(out.read_text())["elements"]) < 5
    assert cli("quotient", "--kind", "i", "--by", "99", stdin=c5)[0] == 2


def test_combinators(cli, tmp_path):
    p = tmp_path / "b6.json"
    p.write_text(doc(cli, "B6"))
    t = doc(cli, "triple", "chain:2", str(p))
    assert cli("con", "--kind", "bz", "--count-only", stdin=t)[1] == "6\n"
    h = doc(cli, "hsum", "chain:3", "chain:4")
    assert cli("classify", stdin=h)[1].startswith("i-lattice, bounded-i")
    assert len(json.loads(doc(cli, "product", "chain:2", "chain:3"))["elements"]) == 6
    assert len(json.loads(doc(cli, "osum", "chain:2", "boolean:2"))["elements"]) == 5


def test_exit_codes(cli, tmp_path):
    assert cli("construct", "nope")[0] == 1
    assert cli("construct", "triple", "chain:2")[0] == 2
    assert cli("validate", stdin="{")[0] == 1
    assert cli("classify", stdin='{"elements": ["0"]}')[0] == 2
    assert cli("census", "10")[0] == 2
    assert cli("census", "4", "--max", "11")[0] == 2
    assert cli("validate", str(tmp_path / "missing.json"))[0] == 1
    n5 = doc(cli, "N5")
    assert cli("con", "--kind", "bz", stdin=n5)[0] == 1
    with pytest.raises(SystemExit) as e:
        main(["con", "--kind", "nope"])
    assert e.value.code == 2


def test_census_report_and_verify(cli, tmp_path):
    rep, csv = tmp_path / "r.json", tmp_path / "h.csv"
    code, out, err = cli("census", "5", "--report", str(rep), "--csv", str(csv), "--verify", "maxcgkl")
    assert code == 0 and "verified" in err
    assert json.loads(rep.read_text())["i_lattice_class_count"] == 4
    assert csv.read_text().startswith("congruences,classes\n")


def test_theorem_violation_exit_code(cli, monkeypatch):
    from invlat import census as cm
    monkeypatch.setattr(cm, "max_witnesses", lambda n: set())
    assert cli("census", "6", "--verify", "maxcgkl")[0] == 3


def test_examples_table(cli):
    code, out, _ = cli("examples-table", "--sizes", "8")
    assert code == 0 and " NO" not in out


def test_dot_and_list(cli):
    out = cli("dot", "--show-involution", stdin=doc(cli, "B6"))[1]
    assert out.startswith("digraph lattice {")
    names = cli("list")[1]
    assert "B6" in names and "chain (1 integer parameter)" in names


def test_console_script_pipeline():
    p1 = subprocess.run([sys.executable, "-m", "invlat.cli", "construct", "B6"],
                        capture_output=True, text=True, check=True)
    p2 = subprocess.run([sys.executable, "-m", "invlat.cli", "con", "--kind", "i", "--count-only"],
                        input=p1.stdout, capture_output=True, text=True, check=True)
    assert p2.stdout == "5\n"
