import pytest

import revtm


def test_corpus_machine_runs():
    flipper = revtm.corpus_text("flipper")
    assert "flipper" in revtm.corpus_names()
    assert len(revtm.corpus_names()) >= 20
    assert revtm.validate(flipper)["deterministic"]
    assert revtm.run(flipper, "10")["output"] == "01"


def test_reversibility_and_bennett():
    assert revtm.verify_reversible(revtm.corpus_text("eraser")) == [(1, 2)]
    compiled = revtm.bennett_compile(revtm.corpus_text("eraser"))
    assert revtm.verify_reversible(compiled) == []
    with pytest.raises(ValueError):
        revtm.validate("machine broken\ntapes 1\n")


def test_universal_machine():
    u = revtm.UniversalMachine()
    assert len(u.digest) == 64
    halt = u.run("1101")
    assert halt["outcome"] == "halted" and halt["steps"] == 4
    program = revtm.catalog_encoding(0) + revtm.literal_payload("101")
    r = u.run(program, budget=10000)
    assert r["output"] == "101" and r["program"] == program
    rr = u.run_reversible(program, budget=100000)
    assert rr["restored"] and rr["output"] == "101" and rr["steps"] > r["steps"]
    assert u.run("10")["diverges"]
    assert u.check_prefix(8, 1000)["violations"] == []
    with pytest.raises(ValueError):
        u.run("012")


def test_depth_lab(tmp_path):
    lab = revtm.DepthLab(12, 10000, cache_dir=str(tmp_path))
    k = lab.k_bounded("")
    assert k["k_upper"] == 4 and k["witnesses"] == ["1101"]
    d0 = lab.logical_depth("00", 0, "rev")
    d1 = lab.logical_depth("00", 1, "rev")
    assert d1["ld"] <= d0["ld"]
    table = lab.table("psi", 2)
    assert [row["n"] for row in table["rows"]] == [0, 1, 2]
    lab.flush()
    assert any(p.name.startswith("ledger-") for p in tmp_path.iterdir())
    again = revtm.DepthLab(12, 10000, workers=3, cache_dir=str(tmp_path))
    assert again.table("psi", 2) == table
