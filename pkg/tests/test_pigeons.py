from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from asymsat.dpll import dpll
from asymsat.pigeons import (
    FormulaTooLarge,
    fphp,
    geq_clauses,
    map_tphp,
    ofphp,
    ophp,
    otphp,
    php,
    px_var,
    sph,
    sph_var,
    tphp,
    x_var,
)
from asymsat.proofs import resolve
from asymsat.propagate import unit_propagate


def brute_force_sat(f):
    for bits in product((False, True), repeat=f.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in f.clauses):
            return True
    return False


def test_php2():
    f = php(2)
    assert f.clause_set() == {frozenset({1}), frozenset({2}), frozenset({-1, -2})}
    assert unit_propagate(f).conflict is not None


def test_php_sizes():
    for n in range(2, 7):
        assert php(n).num_vars == n * (n - 1)
    f = ofphp(3)
    assert f.num_clauses == 3 + 6 + 2 + 3
    assert not brute_force_sat(f)


def test_tphp4_pigeon_clauses():
    f = tphp(4)
    n = 4
    x, p = (lambda y: x_var(n, 1, y)), (lambda y: px_var(n, 1, y))
    for c in [(x(1), -p(2)), (x(2), p(2), -p(3)), (x(3), p(3))]:
        assert frozenset(c) in f.clause_set()
    assert f.names[p(2)] == "p1_2"
    assert not brute_force_sat(otphp(3))


def test_tphp_collapses_to_php_in_n_times_n_minus_2_steps():
    for n in range(3, 7):
        f = tphp(n)
        cs = f.clause_set()
        steps = 0
        derived = set()
        for x in range(1, n + 1):
            cur = (x_var(n, x, 1), -px_var(n, x, 2))
            for y in range(2, n):
                nxt = (x_var(n, x, y), px_var(n, x, y)) + ((-px_var(n, x, y + 1),) if y < n - 1 else ())
                assert frozenset(nxt) in cs
                cur = resolve(cur, nxt, px_var(n, x, y))
                steps += 1
            derived.add(frozenset(cur))
        assert steps == n * (n - 2)
        assert all(any(d <= c for d in derived | cs) for c in php(n).clause_set())


@pytest.mark.parametrize("gen", [php, fphp, ophp, ofphp, tphp, otphp, map_tphp])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_php_family_unsat(gen, n):
    assert not dpll(gen(n)).satisfiable


class TestSph:
    def test_k1_is_plain_php(self):
        n = 4
        f = sph(n, 1)
        assert f.num_vars == (n + 1) * n
        pigeon = [c for c in f.clauses if len(c) == n and all(l > 0 for l in c)]
        assert len(pigeon) == n + 1  # n normal pigeons plus the one-hole GEQ clause

    @pytest.mark.parametrize("n", range(2, 7))
    def test_up_cases(self, n):
        assert unit_propagate(sph(n, n)).conflict is not None
        assert unit_propagate(sph(n, n - 1)).conflict is None

    @pytest.mark.parametrize("n", range(2, 6))
    def test_unsat_all_k(self, n):
        for k in range(1, n + 1):
            assert not dpll(sph(n, k)).satisfiable

    def test_size_guard(self):
        with pytest.raises(FormulaTooLarge):
            sph(30, 15)
        with pytest.raises(ValueError):
            sph(4, 0)

    def test_geq_count(self):
        from math import comb

        for n, k in [(5, 2), (6, 3)]:
            assert len(geq_clauses(sph(n, k), n)) == comb(n, n - k + 1)


@pytest.mark.parametrize("n", range(2, 7))
def test_geq_efficiency_exhaustive(n):
    for k in range(1, n + 1):
        f = sph(n, k)
        for ys in combinations(range(1, n + 1), n - k):
            res = unit_propagate(f, [-sph_var(n, 0, y) for y in ys])
            for y in set(range(1, n + 1)) - set(ys):
                assert res.values.get(sph_var(n, 0, y)) is True


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n), st.randoms())))
def test_geq_efficiency_property(args):
    n, k, rnd = args
    ys = rnd.sample(range(1, n + 1), n - k)
    res = unit_propagate(sph(n, k), [-sph_var(n, 0, y) for y in ys])
    forced = {y for y in range(1, n + 1) if res.values.get(sph_var(n, 0, y)) is True}
    assert forced >= set(range(1, n + 1)) - set(ys)
