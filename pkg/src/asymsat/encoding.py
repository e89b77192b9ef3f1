"""Graphplan-style CNF encoding of bounded planning.

Variables exist only for actions (including one NOOP per fact) that are
reachable in the planning graph.  Three clause kinds are produced:

* AC  - each precondition of a chosen action has a chosen achiever one step earlier
* GC  - each goal has a chosen achiever at the last step (may be empty)
* EC  - incompatible actions are not chosen together
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .cnf import CnfFormula
from .planning import Action, PlanningTask

NOOP_PREFIX = "NOOP-"

AC, GC, EC = "AC", "GC", "EC"


class EncodingError(ValueError):
    pass


def noop(fact: str) -> Action:
    return Action(NOOP_PREFIX + fact, {fact}, {fact}, frozenset(), "")


def is_noop(name: str) -> bool:
    return name.startswith(NOOP_PREFIX)


@dataclass
class EncodedCnf(CnfFormula):
    tags: List[str] = field(default_factory=list)
    bound: int = 0
    var_of: Dict[Tuple[str, int], int] = field(default_factory=dict)
    task: Optional[PlanningTask] = None

    def var(self, action: str, t: int) -> int:
        try:
            return self.var_of[(action, t)]
        except KeyError:
            raise KeyError(f"{action}@{t} is not present in the encoding") from None

    def action_at(self, var: int) -> Tuple[str, int]:
        name, t = self.names[var].rsplit("@", 1)
        return name, int(t)

    def clauses_tagged(self, tag: str) -> List[Tuple[int, ...]]:
        return [c for c, g in zip(self.clauses, self.tags) if g == tag]

    def goal_clauses(self) -> List[Tuple[int, ...]]:
        return self.clauses_tagged(GC)


def present_layers(task: PlanningTask, bound: int) -> List[List[Action]]:
    """Actions present at steps 1..bound (index 0 is step 1)."""
    layers = []
    reached: FrozenSet[str] = task.init
    noops = {f: noop(f) for f in task.facts}
    for _ in range(bound):
        here = [a for a in task.actions if a.pre <= reached]
        here += [noops[f] for f in reached]
        layers.append(here)
        new = set(reached)
        for a in here:
            new |= a.add
        reached = frozenset(new)
    return layers


def _incompatible(a: Action, b: Action, mutex: str, parallel: bool) -> bool:
    na, nb = is_noop(a.name), is_noop(b.name)
    if na and nb:
        return False
    if na:
        return bool(a.pre & b.delete)
    if nb:
        return bool(b.pre & a.delete)
    interfere = bool(a.delete & (b.pre | b.add)) or bool(b.delete & (a.pre | a.add))
    if mutex == "interference":
        return interfere
    if parallel and a.group != b.group:
        return interfere
    return True


def encode(task: PlanningTask, bound: int, mutex: str = "strict") -> EncodedCnf:
    """Encode "a plan of at most ``bound`` steps exists" as CNF.

    ``mutex="strict"`` makes every two non-NOOP actions at a step exclusive,
    except across different groups of a parallel task, where only
    interfering actions are.  ``mutex="interference"`` uses the interference
    rule everywhere.
    """
    if bound < 1:
        raise EncodingError("bound must be >= 1")
    if mutex not in ("strict", "interference"):
        raise EncodingError(f"unknown mutex mode {mutex!r}")
    layers = present_layers(task, bound)

    var_of: Dict[Tuple[str, int], int] = {}
    names: Dict[int, str] = {}
    idx = 0
    for t, layer in enumerate(layers, 1):
        for a in sorted(layer, key=lambda a: a.name):
            idx += 1
            var_of[(a.name, t)] = idx
            names[idx] = f"{a.name}@{t}"

    achievers: List[Dict[str, List[int]]] = []
    for t, layer in enumerate(layers, 1):
        ach: Dict[str, List[int]] = {}
        for a in layer:
            for p in a.add:
                ach.setdefault(p, []).append(var_of[(a.name, t)])
        for p in ach:
            ach[p].sort()
        achievers.append(ach)

    clauses: List[Tuple[int, ...]] = []
    tags: List[str] = []
    for t, layer in enumerate(layers, 1):
        ordered = sorted(layer, key=lambda a: a.name)
        if t > 1:
            prev = achievers[t - 2]
            for a in ordered:
                v = var_of[(a.name, t)]
                for p in sorted(a.pre):
                    clauses.append((-v,) + tuple(prev.get(p, ())))
                    tags.append(AC)
        real = [a for a in ordered if not is_noop(a.name)]
        noop_of = {next(iter(a.pre)): a for a in ordered if is_noop(a.name)}
        pairs = set()
        for i, a in enumerate(real):
            va = var_of[(a.name, t)]
            for b in real[i + 1 :]:
                if _incompatible(a, b, mutex, task.parallel):
                    pairs.add((va, var_of[(b.name, t)]))
            for p in a.delete:
                nop = noop_of.get(p)
                if nop is not None:
                    vn = var_of[(nop.name, t)]
                    pairs.add((min(va, vn), max(va, vn)))
        for x, y in sorted(pairs):
            clauses.append((-x, -y))
            tags.append(EC)
    last = achievers[-1]
    for g in sorted(task.goal):
        clauses.append(tuple(last.get(g, ())))
        tags.append(GC)

    return EncodedCnf(
        num_vars=idx, clauses=clauses, names=names, tags=tags, bound=bound, var_of=var_of, task=task
    )


def decode_plan(enc: EncodedCnf, model: Dict[int, bool]) -> List[Tuple[str, ...]]:
    """Read a plan off a model: the true non-NOOP actions per step, empty steps dropped."""
    steps: List[List[str]] = [[] for _ in range(enc.bound)]
    for var, val in model.items():
        if not val:
            continue
        name, t = enc.action_at(var)
        if not is_noop(name):
            steps[t - 1].append(name)
    return [tuple(sorted(s)) for s in steps if s]
