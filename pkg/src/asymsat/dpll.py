"""DPLL: unit propagation plus binary branching, with an inspectable search tree.

Tree size counts every node, inner nodes and leaves, including the root.
Branching follows an optional guide list first (already-assigned variables
are skipped) and then a fallback heuristic.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Union

from .cnf import CnfFormula
from .propagate import Propagator


class NodeLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"DPLL tree exceeded {limit} nodes")
        self.limit = limit


@dataclass
class TraceNode:
    """One node of the search tree.

    ``literal`` is the decision that leads into this node (None at the root).
    Leaves carry the index of the clause falsified by propagation, or
    ``sat=True``.
    """

    literal: Optional[int] = None
    children: List["TraceNode"] = field(default_factory=list)
    conflict: Optional[int] = None
    sat: bool = False

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def iter_nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.iter_nodes())


@dataclass
class DpllTree:
    root: TraceNode
    satisfiable: bool
    nodes: int
    depth: int
    branch_order: List[int]
    model: Optional[Dict[int, bool]] = None

    @property
    def size_depth_ratio(self) -> float:
        return self.nodes / max(self.depth, 1)


def occurrence_order(formula: CnfFormula) -> List[int]:
    """Variables by number of clause occurrences, most constrained first."""
    counts = [0] * (formula.num_vars + 1)
    for c in formula.clauses:
        for l in c:
            counts[abs(l)] += 1
    return sorted(range(1, formula.num_vars + 1), key=lambda v: (-counts[v], v))


def _static_order(formula: CnfFormula, fallback: str, seed: int) -> List[int]:
    if fallback == "occurrence":
        return occurrence_order(formula)
    if fallback == "first":
        return list(range(1, formula.num_vars + 1))
    if fallback == "random":
        order = list(range(1, formula.num_vars + 1))
        random.Random(seed).shuffle(order)
        return order
    raise ValueError(f"unknown fallback heuristic {fallback!r}")


def dpll(
    formula: CnfFormula,
    branching: Sequence[int] = (),
    values: Union[bool, Mapping[int, bool]] = True,
    fallback: str = "occurrence",
    seed: int = 0,
    node_limit: Optional[int] = None,
) -> DpllTree:
    """Run DPLL and return the full search tree.

    ``values`` gives the value tried first: one bool for all variables or a
    per-variable map (default 1 before 0).  ``fallback`` picks unassigned
    variables once the guide list is exhausted: "occurrence" (static
    most-constrained first), "first" (lowest index) or "random" (seeded
    static permutation).
    """
    prop = Propagator(formula)
    guided = set(branching)
    order = list(branching) + [v for v in _static_order(formula, fallback, seed) if v not in guided]
    first_value: Callable[[int], bool]
    if isinstance(values, Mapping):
        first_value = lambda v: values.get(v, True)  # noqa: E731
    else:
        first_value = lambda v: values  # noqa: E731

    state = {"nodes": 1, "depth": 0, "model": None}
    branch_order: List[int] = []
    seen_branch = set()
    root = TraceNode()
    if prop.root_conflict is not None:
        root.conflict = prop.root_conflict
        return DpllTree(root, False, 1, 0, [])

    limit = node_limit

    def pick(start: int):
        for i in range(start, len(order)):
            if not prop.assigned(order[i]):
                return i
        return None

    def search(node: TraceNode, pos: int, depth: int) -> bool:
        state["depth"] = max(state["depth"], depth)
        i = pick(pos)
        if i is None:
            node.sat = True
            state["model"] = prop.model()
            return True
        var = order[i]
        if var not in seen_branch:
            seen_branch.add(var)
            branch_order.append(var)
        first = first_value(var)
        for val in (first, not first):
            lit = var if val else -var
            child = TraceNode(literal=lit)
            node.children.append(child)
            state["nodes"] += 1
            if limit is not None and state["nodes"] > limit:
                raise NodeLimitExceeded(limit)
            conflict = prop.decide(lit)
            if conflict is not None:
                child.conflict = conflict
                state["depth"] = max(state["depth"], depth + 1)
            elif search(child, i + 1, depth + 1):
                return True
            prop.undo()
        return False

    old_limit = sys.getrecursionlimit()
    need = formula.num_vars + 1000
    if need > old_limit:
        sys.setrecursionlimit(need)
    try:
        sat = search(root, 0, 0)
    finally:
        sys.setrecursionlimit(old_limit)
    return DpllTree(root, sat, state["nodes"], state["depth"], branch_order, state["model"])


def verify_model(formula: CnfFormula, model: Mapping[int, bool]) -> bool:
    """Every clause has a literal made true by the (possibly partial) model."""
    for c in formula.clauses:
        if not any(model.get(abs(l)) is (l > 0) for l in c):
            return False
    return True
