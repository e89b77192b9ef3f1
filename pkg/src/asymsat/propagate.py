"""Incremental unit propagation with two watched literals.

A ``Propagator`` is built once per formula and reused: decisions are pushed
with ``decide`` and undone with ``backtrack``.  Every implied literal keeps the
index of the clause that forced it, which is what proof extraction needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .cnf import CnfFormula

DECISION = -1


class Propagator:
    def __init__(self, formula: CnfFormula):
        n = formula.num_vars
        self.formula = formula
        self.num_vars = n
        self.value = [0] * (n + 1)  # +1 true, -1 false, 0 free
        self.reason = [DECISION] * (n + 1)
        self.trail: List[int] = []
        self.level_starts: List[int] = []
        self.qhead = 0
        self.clauses: List[List[int]] = []
        self.watch: Dict[int, List[int]] = {}
        for v in range(1, n + 1):
            self.watch[v] = []
            self.watch[-v] = []
        self.root_conflict: Optional[int] = None
        units = []
        for cid, c in enumerate(formula.clauses):
            lits = list(dict.fromkeys(c))
            self.clauses.append(lits)
            if not lits:
                if self.root_conflict is None:
                    self.root_conflict = cid
            elif len(lits) == 1:
                units.append(cid)
            else:
                self.watch[lits[0]].append(cid)
                self.watch[lits[1]].append(cid)
        if self.root_conflict is None:
            for cid in units:
                lit = self.clauses[cid][0]
                val = self.lit_value(lit)
                if val < 0:
                    self.root_conflict = cid
                    break
                if val == 0:
                    self._assign(lit, cid)
            if self.root_conflict is None:
                self.root_conflict = self._propagate()
        self.root_size = len(self.trail)

    # -- queries -----------------------------------------------------------
    def lit_value(self, lit: int) -> int:
        v = self.value[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    @property
    def level(self) -> int:
        return len(self.level_starts)

    def assigned(self, var: int) -> bool:
        return self.value[var] != 0

    def model(self) -> Dict[int, bool]:
        return {abs(l): l > 0 for l in self.trail}

    # -- core --------------------------------------------------------------
    def _assign(self, lit: int, reason: int) -> None:
        var = lit if lit > 0 else -lit
        self.value[var] = 1 if lit > 0 else -1
        self.reason[var] = reason
        self.trail.append(lit)

    def _propagate(self) -> Optional[int]:
        value = self.value
        clauses = self.clauses
        watch = self.watch
        trail = self.trail
        while self.qhead < len(trail):
            false_lit = -trail[self.qhead]
            self.qhead += 1
            wl = watch[false_lit]
            i = 0
            while i < len(wl):
                cid = wl[i]
                c = clauses[cid]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                fv = value[first] if first > 0 else -value[-first]
                if fv > 0:
                    i += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    l = c[k]
                    lv = value[l] if l > 0 else -value[-l]
                    if lv >= 0:
                        c[1], c[k] = l, false_lit
                        watch[l].append(cid)
                        wl[i] = wl[-1]
                        wl.pop()
                        moved = True
                        break
                if moved:
                    continue
                if fv < 0:
                    self.qhead = len(trail)
                    return cid
                var = first if first > 0 else -first
                value[var] = 1 if first > 0 else -1
                self.reason[var] = cid
                trail.append(first)
                i += 1
        return None

    def decide(self, lit: int) -> Optional[int]:
        """Open a new level asserting ``lit``; return a falsified clause or None.

        If ``lit`` is already false because of propagation, the clause that
        implied its negation is returned (it is falsified by the extended
        assignment).  Contradicting an earlier decision is an error.
        """
        self.level_starts.append(len(self.trail))
        val = self.lit_value(lit)
        if val > 0:
            return None
        if val < 0:
            r = self.reason[abs(lit)]
            if r == DECISION:
                raise ValueError(f"literal {lit} contradicts an earlier decision")
            return r
        self._assign(lit, DECISION)
        return self._propagate()

    def backtrack(self, level: int = 0) -> None:
        if level >= len(self.level_starts):
            return
        start = self.level_starts[level]
        value = self.value
        reason = self.reason
        for lit in self.trail[start:]:
            var = lit if lit > 0 else -lit
            value[var] = 0
            reason[var] = DECISION
        del self.trail[start:]
        del self.level_starts[level:]
        self.qhead = len(self.trail)

    def undo(self) -> None:
        self.backtrack(len(self.level_starts) - 1)


@dataclass
class UPResult:
    """Outcome of unit propagation on a partial assignment."""

    values: Dict[int, bool]
    trail: List[Tuple[int, int]] = field(default_factory=list)  # (literal, reason clause or -1)
    conflict: Optional[int] = None

    @property
    def consistent(self) -> bool:
        return self.conflict is None


def unit_propagate(formula: CnfFormula, assignment: Mapping[int, bool] | Iterable[int] = ()) -> UPResult:
    """Propagate ``formula`` under ``assignment`` (a var->bool map or a literal list)."""
    if isinstance(assignment, Mapping):
        lits = [v if b else -v for v, b in assignment.items()]
    else:
        lits = list(assignment)
    prop = Propagator(formula)
    conflict = prop.root_conflict
    if conflict is None:
        for lit in lits:
            conflict = prop.decide(lit)
            if conflict is not None:
                break
    return UPResult(
        values=prop.model(),
        trail=[(l, prop.reason[abs(l)]) for l in prop.trail],
        conflict=conflict,
    )
