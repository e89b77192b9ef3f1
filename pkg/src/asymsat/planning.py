"""STRIPS tasks, plan validation, optimal cost by breadth-first search."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

DEFAULT_STATE_LIMIT = 10**7


class PlanningError(Exception):
    pass


class UnknownAction(PlanningError):
    pass


class InapplicableAction(PlanningError):
    pass


class Unsolvable(PlanningError):
    pass


class StateLimitExceeded(PlanningError):
    pass


@dataclass(frozen=True)
class Action:
    name: str
    pre: FrozenSet[str]
    add: FrozenSet[str]
    delete: FrozenSet[str] = frozenset()
    group: str = ""

    def __post_init__(self):
        for attr in ("pre", "add", "delete"):
            object.__setattr__(self, attr, frozenset(getattr(self, attr)))

    def applicable(self, state: FrozenSet[str]) -> bool:
        return self.pre <= state

    def apply(self, state: FrozenSet[str]) -> FrozenSet[str]:
        if not self.pre <= state:
            missing = ", ".join(sorted(self.pre - state))
            raise InapplicableAction(f"{self.name}: missing {missing}")
        return (state - self.delete) | self.add


@dataclass(frozen=True)
class PlanningTask:
    facts: FrozenSet[str]
    actions: Tuple[Action, ...]
    init: FrozenSet[str]
    goal: FrozenSet[str]
    parallel: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "goal", frozenset(self.goal))
        object.__setattr__(self, "actions", tuple(self.actions))
        names = [a.name for a in self.actions]
        if len(set(names)) != len(names):
            raise PlanningError("duplicate action names")
        for a in self.actions:
            stray = (a.pre | a.add | a.delete) - self.facts
            if stray:
                raise PlanningError(f"{a.name} mentions unknown facts {sorted(stray)}")
        for label, s in (("init", self.init), ("goal", self.goal)):
            if not s <= self.facts:
                raise PlanningError(f"{label} mentions unknown facts {sorted(s - self.facts)}")

    def action(self, name: str) -> Action:
        table = self.__dict__.get("_table")
        if table is None:
            table = {a.name: a for a in self.actions}
            object.__setattr__(self, "_table", table)
        try:
            return table[name]
        except KeyError:
            raise UnknownAction(name) from None

    def with_goal(self, goal: Iterable[str]) -> "PlanningTask":
        return PlanningTask(self.facts, self.actions, self.init, frozenset(goal), self.parallel, self.name)


Step = Union[str, Sequence[str]]


def _interferes(a: Action, b: Action) -> bool:
    return bool(a.delete & (b.pre | b.add)) or bool(b.delete & (a.pre | a.add))


def apply_step(task: PlanningTask, state: FrozenSet[str], step: Step) -> FrozenSet[str]:
    """Apply one plan step: an action name, or a set of names run in parallel.

    Parallel steps require a parallel task, at most one action per group and
    pairwise non-interfering actions.
    """
    if isinstance(step, str):
        return task.action(step).apply(state)
    acts = [task.action(n) for n in step]
    if len(acts) == 1:
        return acts[0].apply(state)
    if not task.parallel:
        raise InapplicableAction("parallel step in a sequential task")
    groups = [a.group for a in acts]
    if len(set(groups)) != len(groups):
        raise InapplicableAction("two actions of the same group in one step")
    for i, a in enumerate(acts):
        if not a.pre <= state:
            raise InapplicableAction(f"{a.name}: missing {sorted(a.pre - state)}")
        for b in acts[i + 1 :]:
            if _interferes(a, b):
                raise InapplicableAction(f"{a.name} interferes with {b.name}")
    dels = frozenset().union(*(a.delete for a in acts))
    adds = frozenset().union(*(a.add for a in acts))
    return (state - dels) | adds


def validate_plan(task: PlanningTask, plan: Sequence[Step], goal: Optional[Iterable[str]] = None) -> bool:
    goal = task.goal if goal is None else frozenset(goal)
    state = task.init
    try:
        for step in plan:
            state = apply_step(task, state, step)
    except InapplicableAction:
        return False
    return goal <= state


# -- search -----------------------------------------------------------------


class _Compiled:
    """Bitmask view of a task: fact i is bit i."""

    def __init__(self, task: PlanningTask, actions: Sequence[Action]):
        self.facts = sorted(task.facts)
        self.bit = {f: 1 << i for i, f in enumerate(self.facts)}
        self.actions = list(actions)
        self.ops = [(self.mask(a.pre), self.mask(a.add), self.mask(a.delete)) for a in self.actions]

    def mask(self, facts: Iterable[str]) -> int:
        m = 0
        for f in facts:
            m |= self.bit[f]
        return m


def _bfs(task: PlanningTask, actions: Sequence[Action], goal: FrozenSet[str], limit: int, parallel_groups: bool):
    comp = _Compiled(task, actions)
    start = comp.mask(task.init)
    target = comp.mask(goal)
    if start & target == target:
        return 0, []
    if parallel_groups:
        by_group: Dict[str, List[int]] = {}
        for i, a in enumerate(comp.actions):
            by_group.setdefault(a.group, []).append(i)
        group_lists = list(by_group.values())
    parent = {start: None}
    frontier = deque([start])
    depth = {start: 0}
    while frontier:
        s = frontier.popleft()
        if parallel_groups:
            moves = _parallel_moves(comp, s, group_lists)
        else:
            moves = []
            for i, (pre, add, dele) in enumerate(comp.ops):
                if s & pre == pre:
                    moves.append(((i,), (s & ~dele) | add))
        for label, t in moves:
            if t in parent:
                continue
            parent[t] = (s, label)
            depth[t] = depth[s] + 1
            if t & target == target:
                plan = []
                cur = t
                while parent[cur] is not None:
                    prev, lab = parent[cur]
                    plan.append(tuple(comp.actions[i].name for i in lab))
                    cur = prev
                plan.reverse()
                return depth[t], plan
            if len(parent) > limit:
                raise StateLimitExceeded(f"more than {limit} states")
            frontier.append(t)
    raise Unsolvable("goal unreachable")


def _parallel_moves(comp: _Compiled, s: int, group_lists: List[List[int]]):
    options = []
    for idxs in group_lists:
        opts: List[Optional[int]] = [None]
        for i in idxs:
            pre = comp.ops[i][0]
            if s & pre == pre:
                opts.append(i)
        options.append(opts)
    out = []
    for combo in product(*options):
        chosen = [i for i in combo if i is not None]
        if not chosen:
            continue
        ok = True
        for x in range(len(chosen)):
            px, ax, dx = comp.ops[chosen[x]]
            for y in range(x + 1, len(chosen)):
                py, ay, dy = comp.ops[chosen[y]]
                if dx & (py | ay) or dy & (px | ax):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        dels = adds = 0
        for i in chosen:
            dels |= comp.ops[i][2]
            adds |= comp.ops[i][1]
        out.append((tuple(chosen), (s & ~dels) | adds))
    return out


def _fact_components(task: PlanningTask) -> Optional[List[List[Action]]]:
    """Split a parallel task into groups that touch pairwise disjoint facts."""
    groups: Dict[str, List[Action]] = {}
    for a in task.actions:
        groups.setdefault(a.group, []).append(a)
    touched = {g: frozenset().union(*(a.pre | a.add | a.delete for a in acts)) for g, acts in groups.items()}
    keys = list(groups)
    for i, g in enumerate(keys):
        for h in keys[i + 1 :]:
            if touched[g] & touched[h]:
                return None
    return [groups[g] for g in keys]


def optimal_plan(
    task: PlanningTask,
    goal: Optional[Iterable[str]] = None,
    max_states: int = DEFAULT_STATE_LIMIT,
    decompose: bool = True,
) -> List[Tuple[str, ...]]:
    """Shortest plan as a list of steps (tuples of action names)."""
    return _search(task, goal, max_states, decompose)[1]


def cost(
    task: PlanningTask,
    goal: Optional[Iterable[str]] = None,
    max_states: int = DEFAULT_STATE_LIMIT,
    decompose: bool = True,
) -> int:
    """Length of a shortest plan for ``goal`` (defaults to the task goal).

    For parallel tasks the length counts parallel steps.  When the action
    groups touch disjoint facts the task is solved group by group, which
    gives the same number as the joint search.
    """
    return _search(task, goal, max_states, decompose)[0]


def _search(task, goal, max_states, decompose):
    goal = task.goal if goal is None else frozenset(goal)
    unknown = goal - task.facts
    if unknown:
        raise PlanningError(f"unknown goal facts {sorted(unknown)}")
    if not task.parallel:
        return _bfs(task, task.actions, goal, max_states, False)
    parts = _fact_components(task) if decompose else None
    if parts is None:
        return _bfs(task, task.actions, goal, max_states, True)
    best = 0
    plans = []
    rest = set(goal)
    for acts in parts:
        touched = frozenset().union(*(a.pre | a.add | a.delete for a in acts))
        sub = frozenset(g for g in goal if g in touched)
        rest -= sub
        c, p = _bfs(task, acts, sub, max_states, False)
        best = max(best, c)
        plans.append(p)
    if not rest <= task.init:
        raise Unsolvable(f"goals {sorted(rest - task.init)} are never achieved")
    merged = []
    for t in range(best):
        step = tuple(p[t][0] for p in plans if t < len(p))
        merged.append(step)
    return best, merged


def asym_ratio(task: PlanningTask, max_states: int = DEFAULT_STATE_LIMIT) -> Fraction:
    """max over goals g of cost({g}) divided by cost(goal), as an exact fraction."""
    total = cost(task, max_states=max_states)
    if total == 0:
        raise PlanningError("asymmetry ratio undefined: goal already true")
    worst = max(cost(task, {g}, max_states=max_states) for g in task.goal)
    return Fraction(worst, total)


def subgoal_costs(task: PlanningTask, max_states: int = DEFAULT_STATE_LIMIT) -> Dict[str, int]:
    return {g: cost(task, {g}, max_states=max_states) for g in sorted(task.goal)}
