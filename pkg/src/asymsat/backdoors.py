"""Backdoors: the named constructions, exhaustive and sampled verification,
minimality counts and small optimal-backdoor search.

A set B is a backdoor when every assignment to B makes unit propagation
derive the empty clause.  Exhaustive checking walks the assignment tree of B
depth-first with incremental propagation; a conflicting prefix settles its
whole subtree, because extending an assignment can only keep a conflict.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .cnf import CnfFormula
from .domains import hub_or_branch, map_task, sbw_task
from .encoding import EncodedCnf, encode
from .pigeons import sph, sph_var
from .propagate import Propagator

DEFAULT_CAP = 26

FAMILIES = ("map-sym", "map-asym", "sbw-sym", "sbw-asym", "sph")


class CapExceeded(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, progress: dict):
        super().__init__(message)
        self.progress = progress


@dataclass
class BackdoorSpec:
    family: str
    n: int
    k: int
    formula: CnfFormula
    variables: Tuple[int, ...]

    @property
    def names(self) -> List[str]:
        return [self.formula.name_of(v) for v in self.variables]

    def __len__(self) -> int:
        return len(self.variables)


def ceil_log2(x: float) -> int:
    """Smallest u >= 0 with 2**u >= x."""
    u = 0
    while 2**u < x:
        u += 1
    return u


# -- the constructions ------------------------------------------------------------


def map_sym_names(n: int) -> List[Tuple[str, int]]:
    T = range(3, 2 * n - 2, 2)
    names = []
    for t in T:
        names += [(f"move-L^0-L_{i}^1", t) for i in range(2, n + 1)]
        names += [(f"NOOP-visited-L_{i}^1", t) for i in range(3, n + 1)]
    names.append(("NOOP-at-L^0", 1))
    names += [("move-L^0-L_1^1", t) for t in T if t not in (2 * n - 5, 2 * n - 3)]
    return names


def map_asym_names(n: int) -> List[Tuple[str, int]]:
    names = []
    for i in range(1, ceil_log2(n) + 1):
        t = 2**i - 1
        names.append((f"move-{hub_or_branch(2**i - 2)}-{hub_or_branch(2**i - 1)}", t))
    return names


def sbw_sym_names(n: int) -> List[Tuple[str, int]]:
    def g(j):
        return "t_2" if j == 0 else f"g_{j}"

    cut = {(i, j, i + 1) for i in range(max(2, n - 4), n - 1) for j in range(0, n - 1) if j != i}
    names = []
    for t in range(2, n):
        for i in range(1, n - 1):
            for j in range(0, n + 1):
                if j != i and (i, j, t) not in cut:
                    names.append((f"movetot2-{g(i)}-{g(j)}", t))
    return names


def sbw_asym_names(n: int) -> List[Tuple[str, int]]:
    names = [("movetot2-g_1-t_2", 1), ("movetot2-g_2-t_2", 1)]
    for i in range(1, ceil_log2(n / 3) + 1):
        top = 3 * 2 ** (i - 1) - 1
        names.append((f"movetot2-b_{top}-b_{top - 1}", top))
    return names


def sph_backdoor_vars(n: int, k: int) -> List[int]:
    out = [sph_var(n, 0, y) for y in range(1, n)]
    out += [sph_var(n, x, y) for x in range(k + 2, n + 1) for y in range(1, n)]
    return out


def _resolve(enc: EncodedCnf, names: Sequence[Tuple[str, int]]) -> Tuple[int, ...]:
    return tuple(sorted(enc.var(a, t) for a, t in names))


def known_backdoor(family: str, n: int, k: Optional[int] = None, formula: Optional[CnfFormula] = None) -> BackdoorSpec:
    """The named backdoor for a family, resolved to variable indices.

    The formula is built unless given: MAP at bound 2n-2 (k=1 or 2n-3), SBW at
    bound n-1 (k=0 or n-2), SPH_n^k.
    """
    fam = family.lower()
    if fam == "map-sym":
        if n < 2:
            raise ValueError("MAP-sym needs n >= 2")
        f = formula or encode(map_task(n, 1), 2 * n - 2)
        return BackdoorSpec(fam, n, 1, f, _resolve(f, map_sym_names(n)))
    if fam == "map-asym":
        if n < 2:
            raise ValueError("MAP-asym needs n >= 2")
        f = formula or encode(map_task(n, 2 * n - 3), 2 * n - 2)
        return BackdoorSpec(fam, n, 2 * n - 3, f, _resolve(f, map_asym_names(n)))
    if fam == "sbw-sym":
        if n < 3:
            raise ValueError("SBW-sym needs n >= 3")
        f = formula or encode(sbw_task(n, 0), n - 1)
        return BackdoorSpec(fam, n, 0, f, _resolve(f, sbw_sym_names(n)))
    if fam == "sbw-asym":
        if n < 3:
            raise ValueError("SBW-asym needs n >= 3")
        f = formula or encode(sbw_task(n, n - 2), n - 1)
        return BackdoorSpec(fam, n, n - 2, f, _resolve(f, sbw_asym_names(n)))
    if fam == "sph":
        if k is None or not 1 <= k <= n - 1:
            raise ValueError("SPH backdoor needs 1 <= k <= n-1")
        f = formula or sph(n, k)
        return BackdoorSpec(fam, n, k, f, tuple(sph_backdoor_vars(n, k)))
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


# -- verification -------------------------------------------------------------


@dataclass
class VerificationReport:
    total: int
    conflicts: int
    consistent: int
    counterexample: Optional[Dict[int, bool]] = None
    mode: str = "exhaustive"

    @property
    def is_backdoor(self) -> bool:
        return self.consistent == 0


def _count_consistent(prop: Propagator, B: Sequence[int], stop_after: Optional[int] = None, collect: int = 0):
    """Depth-first count of UP-consistent assignments to B from the current state."""
    found: List[Dict[int, bool]] = []
    count = 0
    chosen: List[int] = []
    m = len(B)

    def rec(i: int) -> bool:
        nonlocal count
        if i == m:
            count += 1
            if len(found) < collect:
                found.append({abs(l): l > 0 for l in chosen})
            return stop_after is not None and count >= stop_after
        v = B[i]
        for lit in (v, -v):
            conflict = prop.decide(lit)
            if conflict is None:
                chosen.append(lit)
                done = rec(i + 1)
                chosen.pop()
                if done:
                    prop.undo()
                    return True
            prop.undo()
        return False

    if prop.root_conflict is None:
        rec(0)
    return count, found


def _count_with_prefix(formula: CnfFormula, B: Sequence[int], prefix: Sequence[bool]) -> Tuple[int, Optional[Dict[int, bool]]]:
    prop = Propagator(formula)
    if prop.root_conflict is not None:
        return 0, None
    for v, val in zip(B, prefix):
        if prop.decide(v if val else -v) is not None:
            return 0, None
    count, found = _count_consistent(prop, B[len(prefix) :], collect=1)
    cex = None
    if found:
        cex = {v: val for v, val in zip(B, prefix)}
        cex.update(found[0])
    return count, cex


def gray_assignments(B: Sequence[int]) -> Iterator[Dict[int, bool]]:
    """All assignments to B in reflected Gray-code order (one flip per step)."""
    m = len(B)
    for i in range(2**m):
        g = i ^ (i >> 1)
        yield {v: bool((g >> j) & 1) for j, v in enumerate(B)}


def brute_force_count(formula: CnfFormula, B: Sequence[int]) -> int:
    """Reference count: every assignment propagated from scratch."""
    prop = Propagator(formula)
    if prop.root_conflict is not None:
        return 0
    consistent = 0
    for a in gray_assignments(B):
        ok = True
        for v, val in a.items():
            if prop.decide(v if val else -v) is not None:
                ok = False
                break
        prop.backtrack(0)
        consistent += ok
    return consistent


def verify_backdoor(
    formula: CnfFormula,
    B: Sequence[int],
    mode: str = "exhaustive",
    samples: int = 10**6,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    split_bits: int = 4,
) -> VerificationReport:
    """Check that no assignment to B is UP-consistent.

    Exhaustive mode accounts for all 2^|B| assignments (|B| <= cap).  With
    ``workers > 1`` the space is cut into 2^split_bits prefix ranges that
    are counted in separate processes and summed.  Sample mode draws
    ``samples`` uniform assignments with a seeded generator.
    """
    B = list(B)
    if len(set(B)) != len(B):
        raise ValueError("backdoor variables must be distinct")
    if mode == "sample":
        return _sample(formula, B, samples, seed)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if len(B) > cap:
        raise CapExceeded(f"|B| = {len(B)} exceeds the exhaustive cap {cap}")
    total = 2 ** len(B)
    bits = min(split_bits, len(B)) if workers > 1 else 0
    prefixes = list(product((True, False), repeat=bits))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_count_with_prefix, [formula] * len(prefixes), [B] * len(prefixes), prefixes))
    else:
        results = [_count_with_prefix(formula, B, p) for p in prefixes]
    consistent = sum(c for c, _ in results)
    cex = next((x for _, x in results if x is not None), None)
    return VerificationReport(total, total - consistent, consistent, cex, "exhaustive")


def _sample(formula: CnfFormula, B: List[int], samples: int, seed: int) -> VerificationReport:
    """Propagate sampled assignments, sharing work along common prefixes.

    The samples are sorted lexicographically, so every prefix of the
    assignment tree covers a contiguous block of rows; a prefix that already
    conflicts settles its whole block at once.
    """
    rng = np.random.default_rng(seed)
    m = len(B)
    prop = Propagator(formula)
    if m == 0 or samples == 0:
        ok = prop.root_conflict is None
        return VerificationReport(samples, 0 if ok else samples, samples if ok else 0, {} if ok else None, "sample")
    bits = rng.integers(0, 2, size=(samples, m), dtype=np.uint8)
    packed = np.packbits(bits, axis=1)
    order = np.lexsort(packed.T[::-1])
    bits = bits[order]
    if prop.root_conflict is not None:
        return VerificationReport(samples, samples, 0, None, "sample")
    survivors = 0
    cex = None
    in_b = set(B)
    # iterative DFS over blocks of rows sharing a prefix; an "enter" item
    # decides its literal (0 at the root) and is paired with a later "leave"
    stack = [("enter", 0, samples, 0, 0)]
    while stack:
        kind, lo, hi, d, lit = stack.pop()
        if kind == "leave":
            prop.undo()
            continue
        if lit:
            if prop.decide(lit) is not None:
                prop.undo()
                continue
            stack.append(("leave", 0, 0, 0, 0))
        if d == m:
            survivors += hi - lo
            if cex is None:
                cex = {abs(l): l > 0 for l in prop.trail if abs(l) in in_b}
            continue
        split = lo + int(np.searchsorted(bits[lo:hi, d], 1))
        v = B[d]
        if split < hi:
            stack.append(("enter", split, hi, d + 1, v))
        if lo < split:
            stack.append(("enter", lo, split, d + 1, -v))
    return VerificationReport(samples, samples - survivors, survivors, cex, "sample")


# -- minimality ----------------------------------------------------------------------


@dataclass
class MinimalityEntry:
    variable: int
    name: str
    consistent: int
    examples: List[Dict[int, bool]] = field(default_factory=list)


def minimality_report(
    formula: CnfFormula,
    B: Sequence[int],
    count: bool = True,
    collect: int = 0,
    cap: int = DEFAULT_CAP,
) -> List[MinimalityEntry]:
    """For each v in B, the UP-consistent assignments to B minus v.

    B is minimal iff every count is positive.  With ``count=False`` each
    count stops at 1 (existence only).
    """
    B = list(B)
    if len(B) - 1 > cap:
        raise CapExceeded(f"|B|-1 = {len(B) - 1} exceeds the cap {cap}")
    prop = Propagator(formula)
    out = []
    for v in B:
        rest = [w for w in B if w != v]
        c, ex = _count_consistent(prop, rest, stop_after=None if count else 1, collect=collect)
        prop.backtrack(0)
        out.append(MinimalityEntry(v, formula.name_of(v), c, ex))
    return out


def sph_minimality_expected(n: int, k: int, bad: bool) -> int:
    lo = k if bad else k + 1
    return math.prod(range(lo, n - 1))


# -- optimal search ------------------------------------------------------------------


@dataclass
class SearchResult:
    backdoor: Optional[Tuple[int, ...]]
    checked_sizes: List[int]
    decisions: int


_ALL = None  # marker: every subset qualifies


def search_optimal(formula: CnfFormula, max_size: int, budget: Optional[int] = None, candidates: Optional[Sequence[int]] = None) -> SearchResult:
    """Smallest backdoor of size <= max_size, first in lexicographic order.

    Sizes are tried in increasing order.  ``budget`` bounds the number of
    propagation calls.
    """
    prop = Propagator(formula)
    cands = sorted(candidates) if candidates is not None else list(range(1, formula.num_vars + 1))
    work = {"decisions": 0}
    if prop.root_conflict is not None:
        return SearchResult((), [0], 0)
    checked = [0]

    def push(lit):
        work["decisions"] += 1
        if budget is not None and work["decisions"] > budget:
            raise BudgetExceeded(
                f"budget of {budget} propagations exhausted", {"sizes_done": list(checked), "decisions": work["decisions"]}
            )
        return prop.decide(lit)

    def tails(w: int, rest: List[int], size: int, allowed: Optional[set]):
        """Sets S from ``rest`` with |S| = size-1 such that {w} + S is a
        backdoor of the current state; _ALL when w alone closes both branches."""
        acc = _ALL
        for lit in (w, -w):
            conflict = push(lit)
            if conflict is None:
                if size == 1:
                    got = set()
                else:
                    got = all_backdoors(rest, size - 1, acc if acc is not _ALL else allowed)
                acc = got if acc is _ALL else (acc & got)
            prop.undo()
            if acc is not _ALL and not acc:
                return set()
        return acc

    def all_backdoors(pool: List[int], size: int, allowed: Optional[set]) -> set:
        """All backdoors of ``size`` drawn from ``pool`` under the current
        state, optionally restricted to the subsets in ``allowed``."""
        result = set()
        for pos, w in enumerate(pool):
            sub = None
            if allowed is not None:
                sub = {t[1:] for t in allowed if t[0] == w}
                if not sub:
                    continue
            rest = pool[pos + 1 :]
            got = tails(w, rest, size, sub)
            if got is _ALL:
                got = set(combinations(rest, size - 1)) if sub is None else sub
            result |= {(w,) + t for t in got}
        return result

    for s in range(1, max_size + 1):
        for pos, v in enumerate(cands):
            got = tails(v, cands[pos + 1 :], s, None)
            if got is _ALL:
                return SearchResult((v,) + tuple(cands[pos + 1 : pos + s]), checked + [s], work["decisions"])
            if got:
                return SearchResult((v,) + min(got), checked + [s], work["decisions"])
        checked.append(s)
    return SearchResult(None, checked, work["decisions"])
