import json

import pytest

from matching_homology.facts import (
    Fact,
    FactError,
    FactRegistry,
    default_registry,
    recompute,
    verify,
)


def _dim_fact(name="K2,1(V,1):m3", value=21, provenance="recomputed"):
    return Fact(name, "koszul-dim", {"m": 3, "d": 3, "b": 1, "p": 2, "q": 1}, value, provenance, "direct rank")


def test_default_registry_contents():
    reg = default_registry()
    assert reg.koszul_dim(4, 3, 2, 6, 0).value == 14003
    assert reg.koszul_dim(4, 3, 2, 7, 0).value == 5400
    assert reg.koszul_dim(4, 3, 2, 6, 0).provenance == "paper-M2"
    (excl,) = reg.row_exclusions(3, 24)
    assert excl.provenance == "external-theorem"
    assert excl.params["degree"] == 5 and excl.params["max_rows"] == 4
    (cap,) = reg.row_caps(3, 23)
    assert cap.provenance == "paper-M2" and not cap.recomputable
    assert (cap.params["degree"], cap.params["max_rows"]) == (5, 4)
    assert reg.row_caps(3, 22) == []
    assert len(reg.multiplicities_for(3, 2, 6, 0)) == 14
    assert all(f.provenance for f in reg)


def test_missing_provenance_is_refused():
    rec = _dim_fact().to_json()
    del rec["provenance"]
    with pytest.raises(FactError):
        Fact.from_json(rec)
    with pytest.raises(FactError):
        FactRegistry.loads(json.dumps({"facts": [rec]}))
    with pytest.raises(FactError):
        _dim_fact(provenance="folklore")
    with pytest.raises(FactError):
        Fact("x", "koszul-dim", {"m": 3}, 1, "recomputed", "c")
    with pytest.raises(FactError):
        Fact("x", "koszul-dim", {"m": 3, "d": 3, "b": 1, "p": 2, "q": 1}, 1, "recomputed", "")


def test_duplicates_and_conflicts():
    reg = FactRegistry([_dim_fact()])
    with pytest.raises(FactError):
        reg.add(_dim_fact())
    with pytest.raises(FactError):
        reg.add(_dim_fact(name="other", value=22))
    with pytest.raises(FactError):
        reg.get("nope")


def test_round_trip(tmp_path):
    reg = default_registry()
    path = tmp_path / "facts.json"
    reg.save(path)
    back = FactRegistry.load(path)
    assert [f.to_json() for f in back] == [f.to_json() for f in reg]


def test_recompute_small_facts():
    assert recompute(_dim_fact()) == 21
    reg = default_registry()
    mults = [f for f in reg.of_kind("koszul-multiplicity") if f.params["m"] <= 4]
    assert mults
    for name, (stored, computed) in verify(reg, [f.name for f in mults]).items():
        assert stored == computed, name
    with pytest.raises(FactError):
        recompute(reg.row_exclusions(3, 24)[0])
