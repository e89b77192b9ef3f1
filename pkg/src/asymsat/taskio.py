"""Plain-text serialization of STRIPS tasks, plus a PDDL export.

The format is line oriented; ``#`` starts a comment::

    name MAP(3,1)
    parallel            # optional; steps may hold one action per group
    fact at-L^0
    fact visited-L^0
    action move-L^0-L_1^1
      group left        # optional
      pre at-L^0
      add at-L_1^1 visited-L_1^1
      del at-L^0
    init at-L^0 visited-L^0
    goal visited-L_1^1

Fact and action names are whitespace-free tokens.  ``pre``, ``add``,
``del``, ``init`` and ``goal`` may repeat; their tokens accumulate.
"""

from __future__ import annotations

import re
from typing import List

from .cnf import FormatError
from .planning import Action, PlanningTask


def dump_task(task: PlanningTask) -> str:
    lines = []
    if task.name:
        lines.append(f"name {task.name}")
    if task.parallel:
        lines.append("parallel")
    for f in sorted(task.facts):
        lines.append(f"fact {f}")
    for a in task.actions:
        lines.append(f"action {a.name}")
        if a.group:
            lines.append(f"  group {a.group}")
        for key, facts in (("pre", a.pre), ("add", a.add), ("del", a.delete)):
            if facts:
                lines.append(f"  {key} " + " ".join(sorted(facts)))
    lines.append("init " + " ".join(sorted(task.init)))
    lines.append("goal " + " ".join(sorted(task.goal)))
    return "\n".join(lines) + "\n"


def load_task(text: str) -> PlanningTask:
    name = ""
    parallel = False
    facts: List[str] = []
    actions: List[dict] = []
    init: List[str] = []
    goal: List[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "name":
            name = " ".join(rest)
        elif key == "parallel":
            parallel = True
        elif key == "fact":
            facts.extend(rest)
        elif key == "action":
            if len(rest) != 1:
                raise FormatError(f"line {lineno}: action takes exactly one name")
            actions.append({"name": rest[0], "pre": [], "add": [], "del": [], "group": ""})
        elif key in ("pre", "add", "del", "group"):
            if not actions:
                raise FormatError(f"line {lineno}: '{key}' outside an action")
            if key == "group":
                actions[-1]["group"] = " ".join(rest)
            else:
                actions[-1][key].extend(rest)
        elif key == "init":
            init.extend(rest)
        elif key == "goal":
            goal.extend(rest)
        else:
            raise FormatError(f"line {lineno}: unknown keyword {key!r}")
    known = set(facts)
    acts = []
    for a in actions:
        for f in a["pre"] + a["add"] + a["del"]:
            if f not in known:
                raise FormatError(f"action {a['name']}: undeclared fact {f!r}")
        acts.append(Action(a["name"], frozenset(a["pre"]), frozenset(a["add"]), frozenset(a["del"]), a["group"]))
    for f in init + goal:
        if f not in known:
            raise FormatError(f"undeclared fact {f!r} in init/goal")
    return PlanningTask(frozenset(facts), tuple(acts), frozenset(init), frozenset(goal), parallel, name)


def read_task(path: str) -> PlanningTask:
    with open(path) as fh:
        return load_task(fh.read())


def write_task(task: PlanningTask, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dump_task(task))


def _pddl_name(s: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]", "_", s).lower()


def to_pddl(task: PlanningTask, domain_name: str = "asymsat") -> tuple[str, str]:
    """Ground (domain, problem) PDDL pair using 0-ary predicates.

    Names are sanitized to PDDL identifiers.  The group annotation of
    parallel tasks has no PDDL counterpart and is dropped.
    """
    preds = " ".join(f"({_pddl_name(f)})" for f in sorted(task.facts))

    def conj(facts, neg=()):
        parts = [f"({_pddl_name(f)})" for f in sorted(facts)]
        parts += [f"(not ({_pddl_name(f)}))" for f in sorted(neg)]
        return "(and " + " ".join(parts) + ")" if parts else "(and)"

    dom = [f"(define (domain {domain_name})", "  (:requirements :strips)", f"  (:predicates {preds})"]
    for a in task.actions:
        dom.append(f"  (:action {_pddl_name(a.name)}")
        dom.append(f"    :precondition {conj(a.pre)}")
        dom.append(f"    :effect {conj(a.add, a.delete - a.add)})")
    dom.append(")")
    prob_name = _pddl_name(task.name or "task")
    prob = [
        f"(define (problem {prob_name}) (:domain {domain_name})",
        "  (:init " + " ".join(f"({_pddl_name(f)})" for f in sorted(task.init)) + ")",
        f"  (:goal {conj(task.goal)})",
        ")",
    ]
    return "\n".join(dom) + "\n", "\n".join(prob) + "\n"
