import json

import pytest

from matching_homology.cli import MISMATCH, OK, OVER_BUDGET, main
from matching_homology.les_solver import ConstraintSystem, les_system
from matching_homology.pipeline import HomologyTable, golden_table


def test_homology_betti(capsys):
    assert main(["homology", "--d", "3", "--n", "6"]) == OK
    out = capsys.readouterr().out
    assert "f-vector\t[20, 10]" in out and "H_0\t9" in out


def test_homology_equivariant(capsys):
    assert main(["homology", "--d", "3", "--n", "8", "--equivariant"]) == OK
    assert "(6,1,1) + (5,3) + (5,2,1) + (4,3,1) + (3,3,2)" in capsys.readouterr().out


def test_homology_over_budget(capsys):
    assert main(["homology", "--d", "3", "--n", "40"]) == OVER_BUDGET
    assert "budget" in capsys.readouterr().out


def test_dump_faces(capsys):
    assert main(["homology", "--d", "3", "--n", "6", "--dump-faces"]) == OK
    lines = capsys.readouterr().out.splitlines()
    assert "123 456" in lines and len([ln for ln in lines if " " in ln]) == 10


def test_koszul_command(capsys):
    assert main(["koszul", "--m", "2", "--d", "3", "--b", "0", "--p", "1", "--q", "1"]) == OK
    out = capsys.readouterr().out
    assert out.splitlines()[0].endswith("\t3")
    assert main(["koszul", "--m", "4", "--d", "3", "--b", "2", "--p", "6", "--q", "0"]) == OVER_BUDGET


def test_pipeline_and_verify_round_trip(tmp_path, capsys):
    out = tmp_path / "table.jsonl"
    assert main(["pipeline", "--max-n", "13", "--out", str(out)]) == OK
    assert HomologyTable.load(out).homology(13) == golden_table().homology(13)
    assert main(["verify-paper", "--table", str(out)]) == MISMATCH  # (20,4) and (23,5) are missing
    assert "INCOMPLETE" in capsys.readouterr().out


def test_verify_detects_corruption(tmp_path, capsys):
    t = golden_table()
    t.set_homology(8, {1: t.get(8, 1) * 2}, "brute-force")
    path = tmp_path / "bad.jsonl"
    t.save(path)
    assert main(["verify-paper", "--table", str(path)]) == MISMATCH
    assert "MISMATCH" in capsys.readouterr().out


def test_pipeline_ambiguity_exit_code(tmp_path, capsys):
    facts = tmp_path / "facts.json"
    facts.write_text(json.dumps({"facts": []}))
    assert main(["pipeline", "--max-n", "17", "--facts", str(facts)]) == MISMATCH
    assert "AMBIGUOUS" in capsys.readouterr().out


def test_solve_command(tmp_path, capsys, brute_tables):
    system = les_system(3, 8, brute_tables[7].entries, brute_tables[5].entries)
    path = tmp_path / "sys.json"
    path.write_text(system.dumps())
    assert main(["solve", "--system", str(path)]) == OK
    data = json.loads(capsys.readouterr().out)
    assert data["complete"] and len(data["solutions"]) == 1


def test_solve_exit_codes_for_open_systems(tmp_path, capsys):
    system = ConstraintSystem(2)
    system.add_variable(("x", 0, (2,)), 1)
    system.add_variable(("x", 0, (1, 1)), 1)
    path = tmp_path / "open.json"
    path.write_text(system.dumps())
    assert main(["solve", "--system", str(path)]) == MISMATCH
    assert len(json.loads(capsys.readouterr().out)["solutions"]) == 4
    assert main(["solve", "--system", str(path), "--max-solutions", "2"]) == OVER_BUDGET


def test_bad_arguments_exit():
    with pytest.raises(SystemExit):
        main(["homology", "--n", "6"])
