import json

import pytest

from quandle16p.cli import main
from quandle16p.quandle import affine, write_table


@pytest.fixture
def tables(tmp_path):
    a = tmp_path / "a.tbl"
    b = tmp_path / "b.tbl"
    c = tmp_path / "c.tbl"
    write_table(affine(3, modulus=7), a)
    write_table(affine(3, modulus=7).relabel([(2 * i) % 7 for i in range(7)]), b)
    write_table(affine(5, modulus=7), c)
    return a, b, c


def test_iso_exit_codes(tables, capsys):
    a, b, c = tables
    assert main(["iso", "--a", str(a), "--b", str(b)]) == 0
    assert capsys.readouterr().out.startswith("isomorphic")
    assert main(["iso", "--a", str(a), "--b", str(c)]) == 1


def test_verify(tables, capsys):
    a, _, _ = tables
    assert main(["verify", "--file", str(a), "--props", "latin,connected,faithful,solvable,si"]) == 0
    out = capsys.readouterr().out
    assert "latin: True" in out and "si: True" in out
    # a simple quandle is not directly decomposable, so asking for dd fails
    assert main(["verify", "--file", str(a), "--props", "dd"]) == 1
    assert main(["verify", "--file", str(a), "--props", "bogus"]) == 2


def test_malformed_table_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.tbl"
    bad.write_text("quandle 2\n0 1\n1\n")
    assert main(["verify", "--file", str(bad), "--props", "latin"]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["verify", "--file", str(tmp_path / "missing.tbl"), "--props", "latin"]) == 2


def test_lattice_dot(tmp_path, capsys):
    q = tmp_path / "q.tbl"
    write_table(affine(2, modulus=9), q)
    dot = tmp_path / "out.dot"
    assert main(["lattice", "--file", str(q), "--dot", str(dot)]) == 0
    assert dot.read_text().startswith("digraph")
    assert "3 congruences" in capsys.readouterr().out


def test_construct_and_verify(tmp_path):
    out = tmp_path / "q4.tbl"
    assert main(["construct", "--family", "q4", "--out", str(out)]) == 0
    assert main(["verify", "--file", str(out), "--props", "latin,connected"]) == 0
    lss = tmp_path / "lss.tbl"
    assert main(["construct", "--family", "lss4p", "--p", "7", "--j", "2", "--out", str(lss)]) == 0
    assert lss.read_text().startswith("quandle 28\n")


def test_construct_latin16_writes_numbered_files(tmp_path):
    out = tmp_path / "stem.tbl"
    assert main(["construct", "--family", "latin16", "--out", str(out)]) == 0
    assert len(list(tmp_path.glob("stem_*.tbl"))) == 9


def test_construct_input_errors(tmp_path):
    out = str(tmp_path / "x.tbl")
    assert main(["construct", "--family", "sr", "--out", out]) == 2
    assert main(["construct", "--family", "sr", "--p", "11", "--out", out]) == 2
    with pytest.raises(SystemExit) as err:
        main(["construct", "--family", "sr", "--p", "8", "--out", out])
    assert err.value.code == 2


def test_chain_search_tier_one(capsys):
    assert main(["chain-search", "--p", "5", "--tier", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sizes"] == [80]
    assert main(["chain-search", "--p", "11", "--tier", "1"]) == 2


def test_classify_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["classify", "--p", "3", "--out", str(out), "--tables-dir", str(tmp_path / "t")]) == 0
    data = json.loads(out.read_text())
    assert data["counts"] == {"si": 1, "dd": 9, "sr_not_dd": 0}
    assert len(list((tmp_path / "t").iterdir())) == 10
