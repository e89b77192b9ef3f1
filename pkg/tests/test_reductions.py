import pytest
from hypothesis import given, settings, strategies as st

from asymsat.cnf import CnfFormula, FormatError
from asymsat.domains import map_task
from asymsat.encoding import encode
from asymsat.pigeons import fphp, map_tphp, ofphp, otphp, php, tphp
from asymsat.proofs import check_proof, refute
from asymsat.reductions import (
    ReductionFunction,
    TransformError,
    apply_reduction,
    identity_reduction,
    is_subsumed,
    map_reduction,
    map_to_ofphp,
    parse_reduction,
    t_translate_proof,
    transform_proof_reduction,
)


class TestReductionFunction:
    def test_identity(self):
        f = php(4)
        assert apply_reduction(f, identity_reduction()).clause_set() == f.clause_set()

    def test_all_true_on_positive_clauses(self):
        f = CnfFormula(3, [(1, 2), (2, 3)])
        r = ReductionFunction({1: True, 2: True, 3: True})
        assert apply_reduction(f, r).clauses == []

    def test_literal_mapping_and_tautology(self):
        r = ReductionFunction({1: -2, 3: False})
        assert r.clause((1, 3, 4)) == (-2, 4)
        assert r.clause((1, 2)) is None  # becomes {-2, 2}
        assert r.clause((-3,)) is None

    def test_transitive_replacement_rejected(self):
        with pytest.raises(ValueError):
            ReductionFunction({1: 2, 2: 3})

    def test_rules_file(self):
        r = parse_reduction("# demo\n1 T\n2 F\n3 -4\nrename 4 1\nvars 1\n")
        f = apply_reduction(CnfFormula(4, [(1, 3), (2, 3), (3, 4)]), r)
        assert f.num_vars == 1 and f.clauses == [(-1,)]
        with pytest.raises(FormatError):
            parse_reduction("1 2 3\n")


class TestMapReduction:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_equals_map_tphp(self, n):
        enc = encode(map_task(n, 1), 2 * n - 2)
        reduced = apply_reduction(enc, map_reduction(n, enc))
        assert reduced.clause_set() == map_tphp(n).clause_set()
        assert reduced.num_vars == map_tphp(n).num_vars

    def test_named_rules(self):
        n = 4
        enc = encode(map_task(n, 1), 2 * n - 2)
        r = map_reduction(n, enc)
        for t in range(1, 2 * n - 1):
            assert r.literal(enc.var("NOOP-at-L^0", t)) is False
        for i in range(1, n + 1):
            assert r.literal(enc.var(f"NOOP-visited-L_{i}^1", 2 * n - 2)) is True

    def test_subsumption(self):
        for n in (3, 4, 5):
            assert is_subsumed(map_tphp(n), otphp(n))
        assert is_subsumed(php(4), php(4))
        assert not is_subsumed(CnfFormula(3, [(1, 2)]), CnfFormula(3, [(1, 3)]))
        assert is_subsumed(CnfFormula(3, [(1, 2)]), CnfFormula(3, [(1,)]))


class TestProofReduction:
    def test_map3_to_map_tphp(self):
        n = 3
        enc = encode(map_task(n, 1), 2 * n - 2)
        _, proof = refute(enc)
        out, stats = transform_proof_reduction(proof, map_reduction(n, enc), map_tphp(n))
        assert check_proof(map_tphp(n), out).ok
        assert stats.output_resolutions <= stats.input_resolutions

    def test_identity_keeps_proof(self):
        _, proof = refute(php(4))
        out, stats = transform_proof_reduction(proof, identity_reduction(), php(4))
        assert check_proof(php(4), out).ok
        assert out.resolution_steps <= proof.resolution_steps
        assert {s.clause for s in out.steps} <= {s.clause for s in proof.steps}

    def test_target_must_subsume(self):
        _, proof = refute(php(3))
        with pytest.raises(TransformError):
            transform_proof_reduction(proof, identity_reduction(), CnfFormula(6, [(1, 2)]))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(3, 4), st.sampled_from(["occurrence", "first", "random"]), st.integers(0, 3))
    def test_reduction_never_grows(self, n, fallback, seed):
        _, proof = refute(otphp(n), fallback=fallback, seed=seed)
        out, _ = transform_proof_reduction(proof, identity_reduction(), otphp(n))
        assert out.resolution_steps <= proof.resolution_steps
        assert check_proof(otphp(n), out).ok


class TestTTranslation:
    def test_tphp4_to_fphp4(self):
        _, proof = refute(tphp(4))
        out, stats = t_translate_proof(proof, 4)
        assert check_proof(fphp(4), out).ok

    def test_otphp4_to_ofphp4_blowup(self):
        _, proof = refute(otphp(4))
        out, stats = t_translate_proof(proof, 4)
        assert check_proof(ofphp(4), out).ok
        assert stats.max_step_blowup <= 20

    def test_no_prefix_pivots_is_literal_copy(self):
        _, proof = refute(php(3))  # php(3) variables coincide with tphp(3)'s x-block
        out, _ = t_translate_proof(proof, 3)
        assert [s.clause for s in out.steps] == [s.clause for s in proof.steps]
        assert check_proof(fphp(3), out).ok

    def test_empty_clause_maps_to_itself(self):
        from asymsat.reductions import _TMap

        assert _TMap(4).clause(()) == frozenset()

    def test_axioms_translate_into_fphp(self):
        from asymsat.reductions import _TMap

        for n in (3, 4, 5):
            tm = _TMap(n)
            target = ofphp(n).clause_set()
            for c in tphp(n).clauses:
                tc = tm.clause(c)
                assert tc is None or any(d <= tc for d in target)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(3, 5), st.sampled_from(["occurrence", "first", "random"]), st.integers(0, 3), st.booleans())
    def test_random_refutations_translate(self, n, fallback, seed, onto):
        src = otphp(n) if onto else tphp(n)
        _, proof = refute(src, fallback=fallback, seed=seed)
        out, stats = t_translate_proof(proof, n)
        assert check_proof(ofphp(n) if onto else fphp(n), out).ok
        assert stats.max_step_blowup <= n * n + n


def test_pipeline_n3():
    rep = map_to_ofphp(3)
    assert rep.ok, rep
    assert rep.tphp_resolutions <= rep.map_resolutions
