import pytest

from asymsat.cli import main
from asymsat.cnf import read_dimacs
from asymsat.proofs import read_proof
from asymsat.taskio import read_task


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_task_and_formula(tmp_path, capsys):
    task = tmp_path / "m.task"
    assert run(capsys, "gen", "map", "--n", 3, "--k", 3, "--out", task, "--pddl", tmp_path / "m")[0] == 0
    assert read_task(task).name == "MAP(3,3)"
    assert (tmp_path / "m-domain.pddl").exists()
    cnf, sym = tmp_path / "s.cnf", tmp_path / "s.sym"
    assert run(capsys, "gen", "sph", "--n", 4, "--k", 2, "--out", cnf, "--symbols", sym)[0] == 0
    assert read_dimacs(cnf, sym).num_vars == 20
    assert run(capsys, "gen", "sph", "--n", 4)[0] == 2


def test_encode_solve_check_roundtrip(tmp_path, capsys):
    cnf, proof = tmp_path / "m.cnf", tmp_path / "m.proof"
    assert run(capsys, "encode", "--family", "map", "--n", 3, "--out", cnf)[0] == 0
    code, out, _ = run(capsys, "solve", "--cnf", cnf, "--proof-out", proof)
    assert code == 0 and "UNSAT" in out
    code, out, _ = run(capsys, "check-proof", "--cnf", cnf, "--proof", proof)
    assert code == 0 and out.strip() == "proof ok"
    assert len(read_proof(proof)) > 1
    lines = proof.read_text().splitlines()
    first_derived = next(i for i, l in enumerate(lines) if not l.endswith(" 0 0 0"))
    parts = lines[first_derived].split()
    parts[-1] = str(int(parts[-1]) % 50 + 1)
    lines[first_derived] = " ".join(parts)
    proof.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "check-proof", "--cnf", cnf, "--proof", proof)
    assert code == 1 and f"step {first_derived + 1}" in out


def test_solve_prints_plan(capsys):
    code, out, _ = run(capsys, "solve", "--family", "map", "--n", 3, "--bound", 5)
    assert code == 0 and "SAT" in out and out.count("step ") == 5


def test_asymratio(capsys):
    code, out, _ = run(capsys, "asymratio", "--family", "sbw", "--n", 6, "--k", 4)
    assert code == 0 and "asymratio\t4/6" in out


def test_backdoor_verbs(tmp_path, capsys):
    code, out, _ = run(capsys, "backdoor", "verify", "--family", "map-asym", "--n", 4, "--csv", tmp_path / "v.csv")
    assert code == 0 and "yes" in out
    assert (tmp_path / "v.csv").read_text().startswith("size,mode")
    code, out, _ = run(capsys, "backdoor", "minimal", "--family", "sph", "--n", 5, "--k", 2)
    assert code == 0 and "0_1" in out
    vars_file = tmp_path / "b.txt"
    vars_file.write_text("0_1 0_2\n")
    code, out, _ = run(capsys, "backdoor", "verify", "--family", "sph", "--n", 5, "--k", 2, "--vars-file", vars_file)
    assert code == 1 and "no" in out
    code, out, _ = run(capsys, "backdoor", "verify", "--family", "sbw-sym", "--n", 5, "--sample", 2000, "--seed", 3)
    assert code == 0
    code, out, _ = run(capsys, "backdoor", "search", "--family", "sph", "--n", 4, "--k", 3, "--max-size", 3)
    assert code == 0 and out.startswith("size ")
    assert run(capsys, "backdoor", "verify", "--family", "map-sym", "--n", 9)[0] == 2


def test_reduce_and_translate(tmp_path, capsys):
    cnf, out = tmp_path / "m.cnf", tmp_path / "t.cnf"
    run(capsys, "export-dimacs", "--family", "map", "--n", 3, "--bound", 4, "--out", cnf)
    assert run(capsys, "reduce", "--formula", cnf, "--rules", "map", "--n", 3, "--out", out)[0] == 0
    from asymsat.pigeons import map_tphp

    assert read_dimacs(out).clause_set() == map_tphp(3).clause_set()
    tp, fp = tmp_path / "t.proof", tmp_path / "f.proof"
    run(capsys, "solve", "--family", "tphp", "--n", 4, "--proof-out", tp)
    code, _, err = run(capsys, "translate-proof", "--from", "tphp", "--to", "fphp", "--n", 4, "--proof", tp, "--out", fp)
    assert code == 0 and "check ok" in err
    assert run(capsys, "translate-proof", "--from", "php", "--to", "fphp", "--n", 4, "--proof", tp)[0] == 2
    rules = tmp_path / "r.txt"
    rules.write_text("1 T\n")
    assert run(capsys, "reduce", "--formula", cnf, "--rules", rules)[0] == 0


def test_cutset_and_report(capsys):
    code, out, _ = run(capsys, "cutset", "--family", "sbw", "--n", 6, "--k", 4)
    assert code == 0 and "lower bound via disjoint cliques\t15" in out
    code, out, _ = run(capsys, "report", "--family", "map", "--n", "3", "--k", "1,3", "--node-limit", 5000)
    assert code == 0 and out.count("\n") == 3


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["cutset", "--n", "3"])
    assert e.value.code == 2
    assert run(capsys, "gen", "map", "--n", 3, "--k", 2)[0] == 2
    assert run(capsys, "check-proof", "--cnf", "/nonexistent", "--proof", "/nonexistent")[0] == 2
    assert run(capsys, "solve", "--family", "php", "--n", 7, "--node-limit", 10)[0] == 1
