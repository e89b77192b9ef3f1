from pathlib import Path

import pytest

from asymsat.cnf import CnfFormula, FormatError, is_tautology, normalize_clause, parse_dimacs, parse_symbol_map
from asymsat.domains import map_task
from asymsat.encoding import encode
from asymsat.pigeons import php
from asymsat.proofs import check_proof, parse_proof, refute

GOLDEN = Path(__file__).parent / "golden"


def test_normalize_sorts_and_dedups():
    assert normalize_clause([3, -1, 3]) == (-1, 3)
    assert is_tautology([1, -1, 2])
    assert not is_tautology([1, 2])


def test_dimacs_golden_and_symbol_map():
    enc = encode(map_task(2, 1), 2)
    assert enc.to_dimacs() == (GOLDEN / "map2_b2.cnf").read_text()
    assert enc.symbol_map() == (GOLDEN / "map2_b2.sym").read_text()


def test_dimacs_roundtrip_keeps_names_and_order():
    enc = encode(map_task(3, 1), 4)
    back = parse_dimacs(enc.to_dimacs(["a comment"]), enc.symbol_map())
    assert back.num_vars == enc.num_vars
    assert back.clauses == enc.clauses
    assert back.names == enc.names


def test_empty_clause_is_written_as_bare_zero():
    f = CnfFormula(2, [(1, 2), ()])
    text = f.to_dimacs()
    assert text.splitlines()[-1] == "0"
    assert parse_dimacs(text).has_empty_clause()


def test_symbol_map_lines_are_tab_separated():
    assert parse_symbol_map("1\tmove-a-b@1\n2\tNOOP-at-a@1\n") == {1: "move-a-b@1", 2: "NOOP-at-a@1"}


@pytest.mark.parametrize(
    "text",
    [
        "1 2 0\n",  # no header
        "p cnf 2 1\n1 3 0\n",  # literal out of range
        "p cnf 2 2\n1 2 0\n",  # clause count mismatch
        "p dnf 2 1\n1 0\n",
    ],
)
def test_malformed_dimacs(text):
    with pytest.raises(FormatError):
        parse_dimacs(text)


def test_proof_golden_file_is_checked_refutation():
    text = (GOLDEN / "php3.proof").read_text()
    _, proof = refute(php(3))
    assert proof.to_text() == text
    parsed = parse_proof(text)
    assert parsed.to_text() == text
    assert check_proof(php(3), parsed).ok


@pytest.mark.parametrize(
    "text",
    [
        "1 1 2 0 0 0\n",  # missing pivot column
        "2 1 0 0 0 0\n",  # wrong index
        "1 1 0 0 0 0\n2 0 1 3 1\n",  # forward reference
        "1 1 2 0 0\n",
    ],
)
def test_malformed_proof(text):
    with pytest.raises(FormatError):
        parse_proof(text)
