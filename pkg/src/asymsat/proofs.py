"""Resolution proofs: extraction from DPLL trees, checking, and a text format.

A proof is a list of steps.  Axiom steps carry a clause of the formula;
derived steps name two earlier steps and the pivot variable.  On disk each
step is one line::

    idx lit lit ... 0 ant1 ant2 pivot

with 1-based indices and ``0 0 0`` for axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .cnf import Clause, CnfFormula, FormatError, normalize_clause
from .dpll import DpllTree, TraceNode
from .propagate import DECISION, Propagator


@dataclass(frozen=True)
class ProofStep:
    clause: Clause
    antecedents: Optional[Tuple[int, int]] = None  # 0-based step indices
    pivot: int = 0

    @property
    def is_axiom(self) -> bool:
        return self.antecedents is None


@dataclass
class ResolutionProof:
    steps: List[ProofStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def resolution_steps(self) -> int:
        return sum(1 for s in self.steps if not s.is_axiom)

    @property
    def axioms(self) -> int:
        return sum(1 for s in self.steps if s.is_axiom)

    def is_refutation(self) -> bool:
        return bool(self.steps) and len(self.steps[-1].clause) == 0

    def add_axiom(self, clause: Iterable[int]) -> int:
        self.steps.append(ProofStep(normalize_clause(clause)))
        return len(self.steps) - 1

    def add_resolvent(self, a: int, b: int, pivot: int) -> int:
        c = resolve(self.steps[a].clause, self.steps[b].clause, pivot)
        self.steps.append(ProofStep(c, (a, b), pivot))
        return len(self.steps) - 1

    def to_text(self) -> str:
        lines = []
        for i, s in enumerate(self.steps, 1):
            lits = " ".join(str(l) for l in s.clause)
            lits = lits + " 0" if lits else "0"
            if s.is_axiom:
                lines.append(f"{i} {lits} 0 0 0")
            else:
                a, b = s.antecedents
                lines.append(f"{i} {lits} {a + 1} {b + 1} {s.pivot}")
        return "\n".join(lines) + "\n"


def resolve(c1: Iterable[int], c2: Iterable[int], pivot: int) -> Clause:
    """Resolvent on ``pivot``; either clause may hold the positive literal."""
    s1, s2 = set(c1), set(c2)
    if pivot in s1 and -pivot in s2:
        pos, neg = s1, s2
    elif -pivot in s1 and pivot in s2:
        pos, neg = s2, s1
    else:
        raise ValueError(f"clauses do not clash on {pivot}")
    return normalize_clause((pos - {pivot}) | (neg - {-pivot}))


def parse_proof(text: str) -> ResolutionProof:
    proof = ResolutionProof()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = [int(t) for t in line.split()]
        if len(toks) < 5:
            raise FormatError(f"line {lineno}: too short")
        idx = toks[0]
        if idx != len(proof.steps) + 1:
            raise FormatError(f"line {lineno}: expected index {len(proof.steps) + 1}, got {idx}")
        try:
            z = toks.index(0, 1)
        except ValueError:
            raise FormatError(f"line {lineno}: missing clause terminator") from None
        lits = toks[1:z]
        tail = toks[z + 1 :]
        if len(tail) != 3:
            raise FormatError(f"line {lineno}: expected 'ant1 ant2 pivot' after clause")
        a, b, piv = tail
        clause = normalize_clause(lits)
        if a == 0 and b == 0:
            proof.steps.append(ProofStep(clause))
        else:
            if not (1 <= a < idx and 1 <= b < idx):
                raise FormatError(f"line {lineno}: antecedents must refer to earlier steps")
            proof.steps.append(ProofStep(clause, (a - 1, b - 1), piv))
    return proof


def read_proof(path: str) -> ResolutionProof:
    with open(path) as fh:
        return parse_proof(fh.read())


def write_proof(proof: ResolutionProof, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(proof.to_text())


# -- checking -----------------------------------------------------------------


@dataclass
class ProofCheck:
    ok: bool
    failed_step: Optional[int] = None  # 1-based, as in the file format
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_proof(
    formula: CnfFormula, proof: ResolutionProof, mode: str = "exact", require_refutation: bool = True
) -> ProofCheck:
    """Check every step; report the first failing one.

    mode "exact": axioms must be clauses of the formula and each derived
    clause must equal the resolvent.  mode "subsumed": an axiom may be a
    superset of a formula clause and a derived clause a superset of the
    resolvent (weakening).
    """
    if mode not in ("exact", "subsumed"):
        raise ValueError(f"unknown mode {mode!r}")
    clauses = [frozenset(c) for c in formula.clauses]
    exact = set(clauses)
    for i, s in enumerate(proof.steps):
        cl = frozenset(s.clause)
        if s.is_axiom:
            if mode == "exact":
                if cl not in exact:
                    return ProofCheck(False, i + 1, "axiom not in formula")
            elif cl not in exact and not any(c <= cl for c in clauses):
                return ProofCheck(False, i + 1, "axiom not subsumed by a formula clause")
            continue
        a, b = s.antecedents
        if not (0 <= a < i and 0 <= b < i):
            return ProofCheck(False, i + 1, "antecedent does not precede step")
        try:
            res = frozenset(resolve(proof.steps[a].clause, proof.steps[b].clause, s.pivot))
        except ValueError as e:
            return ProofCheck(False, i + 1, str(e))
        if any(-l in res for l in res):
            return ProofCheck(False, i + 1, "tautological resolvent")
        if mode == "exact" and res != cl:
            return ProofCheck(False, i + 1, "clause differs from resolvent")
        if mode == "subsumed" and not res <= cl:
            return ProofCheck(False, i + 1, "clause does not contain resolvent")
    if require_refutation and not proof.is_refutation():
        return ProofCheck(False, len(proof.steps) or None, "does not end in the empty clause")
    return ProofCheck(True)


# -- extraction from a DPLL tree -------------------------------------------------


class _Builder:
    def __init__(self, formula: CnfFormula):
        self.formula = formula
        self.proof = ResolutionProof()
        self.axiom_step: Dict[int, int] = {}
        self.derived: Dict[Tuple[FrozenSet[int], int, int], int] = {}
        self.by_clause: Dict[FrozenSet[int], int] = {}

    def axiom(self, cid: int) -> int:
        step = self.axiom_step.get(cid)
        if step is None:
            key = frozenset(self.formula.clauses[cid])
            step = self.by_clause.get(key)
            if step is None:
                step = self.proof.add_axiom(self.formula.clauses[cid])
                self.by_clause[key] = step
            self.axiom_step[cid] = step
        return step

    def resolvent(self, a: int, b: int, pivot: int) -> int:
        c = frozenset(resolve(self.proof.steps[a].clause, self.proof.steps[b].clause, pivot))
        step = self.by_clause.get(c)
        if step is not None:
            return step
        step = self.proof.add_resolvent(a, b, pivot)
        self.by_clause[c] = step
        return step


def _analyze(prop: Propagator, builder: _Builder, conflict: int) -> int:
    """Resolve the conflict clause with reasons until only decisions remain."""
    pos = {abs(l): i for i, l in enumerate(prop.trail)}
    step = builder.axiom(conflict)
    while True:
        clause = builder.proof.steps[step].clause
        implied = [abs(l) for l in clause if prop.reason[abs(l)] != DECISION]
        if not implied:
            return step
        var = max(implied, key=pos.__getitem__)
        step = builder.resolvent(step, builder.axiom(prop.reason[var]), var)


def extract_resolution(tree: DpllTree, formula: CnfFormula) -> ResolutionProof:
    """Turn a DPLL refutation tree into a resolution refutation.

    Each leaf yields a clause over negated decisions of its path; inner nodes
    resolve their children's clauses on the branching variable, or pass up a
    child clause that does not mention it.  Identical clauses are shared.
    """
    if tree.satisfiable:
        raise ValueError("cannot extract a refutation from a satisfiable run")
    prop = Propagator(formula)
    builder = _Builder(formula)
    if prop.root_conflict is not None:
        _analyze(prop, builder, prop.root_conflict)
        return builder.proof

    def visit(node: TraceNode) -> int:
        if node.is_leaf:
            if node.conflict is None:
                raise ValueError("open leaf in refutation tree")
            return _analyze(prop, builder, node.conflict)
        results = []
        for child in node.children:
            conflict = prop.decide(child.literal)
            if child.is_leaf:
                if conflict is None or conflict != child.conflict:
                    conflict = conflict if conflict is not None else child.conflict
                results.append((child.literal, _analyze(prop, builder, conflict)))
            else:
                if conflict is not None:
                    raise ValueError("trace does not replay: unexpected conflict")
                results.append((child.literal, visit(child)))
            prop.undo()
            lit, step = results[-1]
            if -lit not in builder.proof.steps[step].clause:
                return step
        (l1, s1), (l2, s2) = results
        return builder.resolvent(s1, s2, abs(l1))

    visit(tree.root)
    return builder.proof


def refute(formula: CnfFormula, **dpll_kwargs) -> Tuple[DpllTree, ResolutionProof]:
    from .dpll import dpll

    tree = dpll(formula, **dpll_kwargs)
    return tree, extract_resolution(tree, formula)
