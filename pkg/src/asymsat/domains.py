"""Generators for the MAP, SBW and red-herring planning tasks.

Naming follows the usual notation: MAP nodes are ``L^0``, ``L_i^j``;
SBW blocks are ``g_i`` (good) and ``b_i`` (bad) and the second table ``t_2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .planning import Action, PlanningTask


class InvalidParameters(ValueError):
    pass


HUB = "L^0"
T2 = "t_2"


def hub_or_branch(j: int) -> str:
    """Node j on branch 1, with j=0 meaning the hub."""
    return HUB if j == 0 else f"L_1^{j}"


def map_nodes(n: int) -> List[str]:
    nodes = [HUB] + [f"L_1^{j}" for j in range(1, 2 * n - 2)]
    nodes += [f"L_{i}^1" for i in range(2, n + 1)]
    return nodes


def map_edges(n: int) -> List[Tuple[str, str]]:
    edges = [(HUB, f"L_{i}^1") for i in range(1, n + 1)]
    edges += [(f"L_1^{j}", f"L_1^{j + 1}") for j in range(1, 2 * n - 3)]
    return edges


def _graph_task(edges, start_nodes, goal_nodes, extra_facts=(), groups=None, parallel=False, name=""):
    groups = groups or {}
    facts = set(extra_facts)
    actions = []
    for x, y in edges:
        for a, b in ((x, y), (y, x)):
            facts |= {f"at-{a}", f"at-{b}", f"visited-{b}", f"visited-{a}"}
            actions.append(
                Action(f"move-{a}-{b}", {f"at-{a}"}, {f"at-{b}", f"visited-{b}"}, {f"at-{a}"}, groups.get(a, ""))
            )
    init = {f"at-{s}" for s in start_nodes}
    goal = {f"visited-{g}" for g in goal_nodes}
    facts |= init | goal
    return PlanningTask(frozenset(facts), tuple(sorted(actions, key=lambda a: a.name)), frozenset(init), frozenset(goal), parallel, name)


def map_goal_nodes(n: int, k: int) -> List[str]:
    """k=1 visits every first-level node; each +2 on k moves the branch-1
    goal two steps deeper and drops the highest-numbered remaining spoke."""
    spokes = n - 1 - (k - 1) // 2
    return [f"L_1^{k}"] + [f"L_{i}^1" for i in range(2, 2 + spokes)]


def map_task(n: int, k: int = 1) -> PlanningTask:
    if n < 2:
        raise InvalidParameters("MAP needs n >= 2")
    if k % 2 == 0 or not 1 <= k <= 2 * n - 1:
        raise InvalidParameters(f"MAP k must be odd in 1..{2 * n - 1}, got {k}")
    # k = 2n-1 names a node beyond the branch: the goal fact exists but no action reaches it.
    extra = {f"visited-L_1^{k}"}
    return _graph_task(map_edges(n), [HUB], map_goal_nodes(n, k), extra, name=f"MAP({n},{k})")


# -- SBW ---------------------------------------------------------------------


def sbw_blocks(n: int, k: int) -> Tuple[List[str], List[str]]:
    return [f"g_{i}" for i in range(1, n - k + 1)], [f"b_{i}" for i in range(1, k + 1)]


def sbw_targets(n: int, k: int) -> Dict[str, List[str]]:
    """Where each block may be stacked."""
    good, bad = sbw_blocks(n, k)
    targets = {}
    for g in good:
        targets[g] = [T2] + [h for h in good if h != g]
    for i, b in enumerate(bad, 1):
        targets[b] = [T2] + good if i == 1 else [f"b_{i - 1}"]
    return targets


def sbw_task(n: int, k: int = 0, t2_clear: bool = True) -> PlanningTask:
    """Stack all n blocks above the one-block table t_2.

    ``t2_clear=False`` drops the clear-t_2 fact, so t_2 no longer limits how
    many blocks sit on it directly.  Costs are unchanged; the encoding loses
    one NOOP per step.
    """
    if n < 1:
        raise InvalidParameters("SBW needs n >= 1")
    if not 0 <= k <= n:
        raise InvalidParameters(f"SBW k must lie in 0..{n}, got {k}")
    good, bad = sbw_blocks(n, k)
    blocks = good + bad
    facts = {f"clear-{T2}"} if t2_clear else set()
    actions = []
    for x in blocks:
        facts |= {f"ontable-{x}", f"clear-{x}", f"abovet2-{x}"}
    for x, ys in sbw_targets(n, k).items():
        for y in ys:
            on = f"on-{x}-{y}"
            facts.add(on)
            # t_2 is above itself by definition; that static fact is left implicit.
            above_y = set() if y == T2 else {f"abovet2-{y}"}
            clear_y = set() if (y == T2 and not t2_clear) else {f"clear-{y}"}
            actions.append(
                Action(
                    f"movetot2-{x}-{y}",
                    {f"ontable-{x}", f"clear-{x}"} | clear_y | above_y,
                    {on, f"abovet2-{x}"},
                    {f"ontable-{x}"} | clear_y,
                )
            )
            actions.append(
                Action(f"movefromt2-{x}-{y}", {on, f"clear-{x}"}, {f"ontable-{x}"} | clear_y, {on, f"abovet2-{x}"})
            )
    init = {f"ontable-{x}" for x in blocks} | {f"clear-{x}" for x in blocks}
    if t2_clear:
        init.add(f"clear-{T2}")
    goal = {f"abovet2-{x}" for x in blocks}
    return PlanningTask(frozenset(facts), tuple(sorted(actions, key=lambda a: a.name)), frozenset(init), frozenset(goal), False, f"SBW({n},{k})")


def sbw_block_name(n: int, k: int, j: int) -> str:
    """g_0 is the conventional alias of the second table."""
    return T2 if j == 0 else f"g_{j}"


# -- red herring ---------------------------------------------------------------


def red_herring_task(n: int, k: int = 1) -> PlanningTask:
    """Two disjoint maps worked on in parallel.

    Left: a path L^0 - L_1^1 - ... - L_1^{2n-2}, goal L_1^k.
    Right: a star R^0 with leaves R_1^1..R_n^1, all to be visited.
    """
    if n < 2:
        raise InvalidParameters("red herring needs n >= 2")
    if not 1 <= k <= 2 * n - 2:
        raise InvalidParameters(f"red herring k must lie in 1..{2 * n - 2}, got {k}")
    left = [(HUB, "L_1^1")] + [(f"L_1^{j}", f"L_1^{j + 1}") for j in range(1, 2 * n - 2)]
    right = [("R^0", f"R_{i}^1") for i in range(1, n + 1)]
    groups = {}
    for x, y in left:
        groups[x] = groups[y] = "left"
    for x, y in right:
        groups[x] = groups[y] = "right"
    return _graph_task(
        left + right, [HUB, "R^0"], [f"L_1^{k}"] + [f"R_{i}^1" for i in range(1, n + 1)],
        groups=groups, parallel=True, name=f"RH({n},{k})",
    )


@dataclass(frozen=True)
class InstanceSpec:
    family: str  # "map", "sbw" or "redherring"
    n: int
    k: int

    def task(self) -> PlanningTask:
        return build_task(self.family, self.n, self.k)

    @property
    def label(self) -> str:
        return f"{self.family}-{self.n}-{self.k}"


def build_task(family: str, n: int, k: int) -> PlanningTask:
    fam = family.lower().replace("-", "").replace("_", "")
    if fam == "map":
        return map_task(n, k)
    if fam == "sbw":
        return sbw_task(n, k)
    if fam in ("redherring", "rh"):
        return red_herring_task(n, k)
    raise InvalidParameters(f"unknown family {family!r}")
