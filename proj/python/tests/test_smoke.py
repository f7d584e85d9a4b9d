import json

import pytest

import koszulkit as kk


def test_corpus_loads_and_round_trips():
    ids = kk.example_ids()
    assert "hopf" in ids and "trefoil" in ids
    for i in ids:
        doc = kk.load_example(i)
        again = kk.parse(doc.serialize())
        assert again.serialize() == doc.serialize()
        json.loads(doc.to_json())


def test_hopf_checks():
    doc = kk.load_example("hopf")
    assert kk.check_d2(doc, "ce")["ok"]
    assert kk.check_coainf(doc, "lc")["ok"]
    tw = kk.verify_twist(doc)
    assert tw["ok"]
    assert {"c1", "c2", "k1", "l1", "u1"} <= {e["gen"] for e in tw["equations"]}


def test_printed_la_table_is_not_associative():
    r = kk.check_ainf(kk.load_example("hopf"), "la", 3)
    assert not r["ok"] and r["witnesses"]


def test_trefoil_augmentations():
    doc = kk.load_example("trefoil")
    assert len(kk.augmentations(doc, "ce", "gf2")) == 5
    assert len(kk.augmentations(doc, "ce", "gf3")) == 10


def test_unknot_koszul():
    r = kk.koszul_verdict(kk.load_example("unknot_minus"), -10, 0, 12)
    assert r["verdict"] == "acyclic_in_window"
    assert r["betti"][0] == 1 and all(r["betti"][k] == 0 for k in range(-10, 0))


def test_grading():
    assert kk.leg_from_degree(-2) == 1
    assert kk.formal_dimension("fi", 3, a=[1, 1]) == 0
    assert kk.formal_dimension("fi", 4, a=[3]) == 0


def test_diagnostics_carry_positions():
    bad = "dga x over field q {\n  gen y : 1 -> 1 deg 0;\n  d y = z;\n}\n"
    ds = kk.diagnostics(bad)
    assert ds
    with pytest.raises(kk.DslError):
        kk.parse(bad)


def test_cli_in_process():
    code, out, err = kk.run_cli(["check-d2", "--example", "hopf", "--json"])
    assert code == 0, err
    rep = json.loads(out)
    assert rep["command"] == "check-d2" and rep["ok"]
    code, _, _ = kk.run_cli(["no-such-command"])
    assert code == 2
