"""Pigeonhole formulas: PHP and its functional / onto variants, the temporal
variants TPHP / mapTPHP, and the parameterised SPH family.

For PHP-like formulas there are n pigeons and n-1 holes.  ``x_y`` (pigeon x in
hole y) gets index (x-1)(n-1)+y.  The temporal formulas add prefix variables
``px_y`` (2 <= y <= n-1), meaning "x was placed in a hole before y", indexed
after the x_y block.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import List, Tuple

from .cnf import CnfFormula

DEFAULT_GEQ_LIMIT = 2_000_000


class FormulaTooLarge(ValueError):
    pass


def x_var(n: int, x: int, y: int) -> int:
    return (x - 1) * (n - 1) + y


def px_var(n: int, x: int, y: int) -> int:
    if not 2 <= y <= n - 1:
        raise ValueError(f"p{x}_{y} does not exist for n={n}")
    return n * (n - 1) + (x - 1) * (n - 2) + (y - 1)


def php_names(n: int, temporal: bool = False) -> dict:
    names = {x_var(n, x, y): f"{x}_{y}" for x in range(1, n + 1) for y in range(1, n)}
    if temporal:
        for x in range(1, n + 1):
            for y in range(2, n):
                names[px_var(n, x, y)] = f"p{x}_{y}"
    return names


def _check(n: int) -> None:
    if n < 2:
        raise ValueError("pigeonhole formulas need n >= 2")


def _pigeon_clauses(n):
    return [tuple(x_var(n, x, y) for y in range(1, n)) for x in range(1, n + 1)]


def _exclusions(n):
    return [(-x_var(n, x, y), -x_var(n, z, y)) for y in range(1, n) for x, z in combinations(range(1, n + 1), 2)]


def _functional(n):
    return [(-x_var(n, x, y), -x_var(n, x, z)) for x in range(1, n + 1) for y, z in combinations(range(1, n), 2)]


def _onto(n):
    return [tuple(x_var(n, x, y) for x in range(1, n + 1)) for y in range(1, n)]


def _temporal(n):
    cl = []
    for x in range(1, n + 1):
        if n == 2:
            cl.append((x_var(n, x, 1),))
            continue
        cl.append((x_var(n, x, 1), -px_var(n, x, 2)))
        for y in range(2, n - 1):
            cl.append((x_var(n, x, y), px_var(n, x, y), -px_var(n, x, y + 1)))
        cl.append((x_var(n, x, n - 1), px_var(n, x, n - 1)))
    return cl


def php(n: int) -> CnfFormula:
    _check(n)
    return CnfFormula(n * (n - 1), _pigeon_clauses(n) + _exclusions(n), php_names(n))


def fphp(n: int) -> CnfFormula:
    _check(n)
    return CnfFormula(n * (n - 1), _pigeon_clauses(n) + _exclusions(n) + _functional(n), php_names(n))


def ophp(n: int) -> CnfFormula:
    _check(n)
    return CnfFormula(n * (n - 1), _pigeon_clauses(n) + _exclusions(n) + _onto(n), php_names(n))


def ofphp(n: int) -> CnfFormula:
    _check(n)
    return CnfFormula(n * (n - 1), _pigeon_clauses(n) + _exclusions(n) + _functional(n) + _onto(n), php_names(n))


def _tphp_vars(n):
    return n * (n - 1) + n * max(0, n - 2)


def tphp(n: int) -> CnfFormula:
    _check(n)
    return CnfFormula(_tphp_vars(n), _exclusions(n) + _temporal(n), php_names(n, True))


def otphp(n: int) -> CnfFormula:
    _check(n)
    return CnfFormula(_tphp_vars(n), _exclusions(n) + _temporal(n) + _onto(n), php_names(n, True))


def map_tphp(n: int) -> CnfFormula:
    """TPHP plus: a pigeon in hole y+1 needs some pigeon in hole y."""
    _check(n)
    occ = []
    for x in range(1, n + 1):
        for y in range(1, n - 1):
            occ.append((-x_var(n, x, y + 1),) + tuple(x_var(n, z, y) for z in range(1, n + 1)))
    return CnfFormula(_tphp_vars(n), _exclusions(n) + _temporal(n) + occ, php_names(n, True))


# -- SPH -------------------------------------------------------------------


def sph_var(n: int, x: int, y: int) -> int:
    """Pigeons 0..n, holes 1..n."""
    return x * n + y


def sph(n: int, k: int, limit: int = DEFAULT_GEQ_LIMIT) -> CnfFormula:
    """SPH_n^k: pigeon 0 is bad, 1..k-1 are good, k..n are normal.

    The bad pigeon must occupy at least k holes -- written naively as one
    clause per (n-k+1)-subset of holes -- and may not share a hole with a
    normal pigeon.  Good pigeons may share with it.
    """
    if n < 1 or not 1 <= k <= n:
        raise ValueError(f"SPH needs n >= 1 and 1 <= k <= n, got n={n}, k={k}")
    size = n - k + 1
    if comb(n, size) > limit:
        raise FormulaTooLarge(f"{comb(n, size)} GEQ clauses exceed the limit {limit}")
    v = lambda x, y: sph_var(n, x, y)  # noqa: E731
    cl: List[Tuple[int, ...]] = []
    for x in range(1, n + 1):
        cl.append(tuple(v(x, y) for y in range(1, n + 1)))
    for y in range(1, n + 1):
        for x, z in combinations(range(1, n + 1), 2):
            cl.append((-v(x, y), -v(z, y)))
    for y in range(1, n + 1):
        for x in range(max(k, 1), n + 1):
            cl.append((-v(0, y), -v(x, y)))
    for ys in combinations(range(1, n + 1), size):
        cl.append(tuple(v(0, y) for y in ys))
    names = {v(x, y): f"{x}_{y}" for x in range(n + 1) for y in range(1, n + 1)}
    return CnfFormula((n + 1) * n, cl, names)


def geq_clauses(formula: CnfFormula, n: int) -> List[Tuple[int, ...]]:
    bad = {sph_var(n, 0, y) for y in range(1, n + 1)}
    return [c for c in formula.clauses if c and all(l in bad for l in c)]
