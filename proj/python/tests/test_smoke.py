import json

import pytest

import treedim


def test_closed_forms_match_known_values():
    assert treedim.closed_form(2)["value"] == pytest.approx(1 / 3)
    cf3 = treedim.closed_form(3)
    assert cf3["rational"] == 0.75 and cf3["log2_coeff"] == 0
    assert treedim.closed_form(4)["value"] == pytest.approx(1 / 2)
    assert treedim.closed_form(6)["value"] == pytest.approx(0.580819, abs=1e-6)


def test_dimension_report_converges_on_binary_tree():
    doc = treedim.dimension_report(2, max_level=8)
    assert doc["m"] == 2 and doc["group"] == "bsv"
    assert doc["closed_form_within_tail"]
    assert len(doc["levels"]) == 8
    last = doc["levels"][-1]
    assert abs(last["partial_dim"] - 1 / 3) <= last["tail"]
    # The built-in group reports the derived-subgroup ladder: 1, 1, 2, 8, ...
    assert [int(lvl["index"]) for lvl in doc["levels"][:4]] == [1, 1, 2, 8]


def test_dimension_report_reads_automaton_files(tmp_path):
    spec = {
        "alphabet_size": 2,
        "states": [{"name": "a", "output": [2, 1], "transitions": ["e", "a"]}],
    }
    path = tmp_path / "adder.json"
    path.write_text(json.dumps(spec))
    doc = treedim.dimension_report(2, group=f"file:{path}", max_level=4)
    assert [int(lvl["index"]) for lvl in doc["levels"]] == [2, 4, 8, 16]
    assert "closed_form" not in doc


def test_verify_structure_checks_pass():
    res = treedim.verify(3, which="structure", max_level=2)
    assert res["ok"]
    assert res["records"]
    assert all(r["pass"] or r["skipped"] for r in res["records"])


def test_element_orders():
    doc = treedim.element_order(3, "a b", level=2)
    assert doc["order"] == 3 and doc["order_mod_derived"] == 3
    assert treedim.element_order(2, "e", level=3)["order"] == 1
    assert treedim.element_order(4, "a b", level=1)["order_mod_derived"] == 2


def test_huge_level_indices_survive_the_string_roundtrip():
    doc = treedim.dimension_report(2, max_level=8)
    assert int(doc["levels"][-1]["index"]) > 2**63
    assert treedim.element_order(2, "b", level=9)["order"] == 2**9


def test_errors_surface_as_exceptions():
    with pytest.raises(ValueError):
        treedim.dimension_report(1)
    with pytest.raises(ValueError):
        treedim.verify(2, which="prop99")
    with pytest.raises(treedim.PointBudgetExceeded):
        treedim.dimension_report(4, point_budget=3)
