"""Reduction functions on CNF formulas and the proof transformations they license.

A reduction function r maps each variable to a constant, to a (possibly
negated) other variable, or to itself.  r* substitutes, then drops false
literals, clauses with a true literal and tautologies.  If r*(phi) is
subsumed by psi, a refutation of phi turns into a refutation of psi with no
more resolution steps (``transform_proof_reduction``).

The t-translation turns a refutation of oTPHP_n into one of ofPHP_n by
reading each prefix variable px_y as the clause fragment it stands for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .cnf import Clause, CnfFormula, FormatError, normalize_clause
from .domains import map_task
from .encoding import EncodedCnf, encode
from .pigeons import map_tphp, ofphp, otphp, php_names, px_var, x_var
from .proofs import ResolutionProof, check_proof, resolve


class TransformError(RuntimeError):
    pass


Target = Union[bool, int]  # a constant or a signed literal


@dataclass
class ReductionFunction:
    """``mapping`` sends a variable to True/False or to a signed literal;
    unmapped variables stay.  ``rename`` then relabels surviving variables
    into the target space (identity when empty)."""

    mapping: Dict[int, Target] = field(default_factory=dict)
    rename: Dict[int, int] = field(default_factory=dict)
    num_vars: Optional[int] = None
    names: Dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for v, t in self.mapping.items():
            if isinstance(t, bool):
                continue
            w = abs(t)
            if w != v and w in self.mapping and self.mapping[w] != w:
                raise ValueError(f"transitive replacement: {v} -> {t} but {w} is itself replaced")

    def literal(self, lit: int) -> Target:
        v = abs(lit)
        t = self.mapping.get(v, v)
        if isinstance(t, bool):
            return t if lit > 0 else not t
        out = t if lit > 0 else -t
        if self.rename:
            w = abs(out)
            if w not in self.rename:
                raise TransformError(f"variable {w} survives but has no name in the target")
            out = self.rename[w] if out > 0 else -self.rename[w]
        return out

    def clause(self, clause: Sequence[int]) -> Optional[Clause]:
        """r*(C): None when the clause is satisfied or tautological."""
        out = set()
        for l in clause:
            t = self.literal(l)
            if t is True:
                return None
            if t is False:
                continue
            if -t in out:
                return None
            out.add(t)
        return normalize_clause(out)


def identity_reduction() -> ReductionFunction:
    return ReductionFunction()


def parse_reduction(text: str) -> ReductionFunction:
    """Rules file: ``VAR T``, ``VAR F`` or ``VAR LIT`` per line, plus
    optional ``rename VAR NEW`` and ``vars N`` lines.  ``#`` comments."""
    mapping: Dict[int, Target] = {}
    rename: Dict[int, int] = {}
    num_vars = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        try:
            if toks[0] == "rename" and len(toks) == 3:
                rename[int(toks[1])] = int(toks[2])
            elif toks[0] == "vars" and len(toks) == 2:
                num_vars = int(toks[1])
            elif len(toks) == 2:
                v = int(toks[0])
                t = toks[1].upper()
                mapping[v] = True if t in ("T", "1", "TRUE") else False if t in ("F", "0", "FALSE") else int(toks[1])
            else:
                raise ValueError
        except ValueError:
            raise FormatError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    return ReductionFunction(mapping, rename, num_vars)


def apply_reduction(formula: CnfFormula, r: ReductionFunction) -> CnfFormula:
    seen: Set[FrozenSet[int]] = set()
    clauses = []
    for c in formula.clauses:
        rc = r.clause(c)
        if rc is None:
            continue
        key = frozenset(rc)
        if key not in seen:
            seen.add(key)
            clauses.append(rc)
    n = r.num_vars if r.num_vars is not None else formula.num_vars
    names = r.names if r.rename else dict(formula.names)
    return CnfFormula(n, clauses, names)


class _SubsumptionIndex:
    def __init__(self, formula: CnfFormula):
        self.clauses = [frozenset(c) for c in formula.clauses]
        self.exact = {c: i for i, c in enumerate(self.clauses)}
        self.by_lit: Dict[int, List[int]] = {}
        self.empty = None
        for i, c in enumerate(self.clauses):
            if not c and self.empty is None:
                self.empty = i
            for l in c:
                self.by_lit.setdefault(l, []).append(i)

    def find(self, clause) -> Optional[int]:
        """Index of a clause that is a subset of ``clause`` (exact match preferred)."""
        cs = frozenset(clause)
        if cs in self.exact:
            return self.exact[cs]
        if self.empty is not None:
            return self.empty
        for l in cs:
            for i in self.by_lit.get(l, ()):
                if self.clauses[i] <= cs:
                    return i
        return None


def is_subsumed(f1: CnfFormula, f2: CnfFormula) -> bool:
    """Every clause of f1 contains some clause of f2."""
    idx = _SubsumptionIndex(f2)
    return all(idx.find(c) is not None for c in f1.clauses)


# -- the MAP reduction ----------------------------------------------------------


def map_reduction(n: int, formula: Optional[EncodedCnf] = None) -> ReductionFunction:
    """Reduction of the MAP_n^1 encoding (bound 2n-2) onto mapTPHP_n.

    Moves out of the hub at odd steps become pigeon placements i_{(t+1)/2};
    NOOP-visited at odd steps t >= 3 become the prefix variables.  Every
    other variable is fixed or tied to one of those.
    """
    enc = formula if formula is not None else encode(map_task(n, 1), 2 * n - 2)
    last = 2 * n - 2
    mapping: Dict[int, Target] = {}
    rename: Dict[int, int] = {}
    for var in range(1, enc.num_vars + 1):
        name, t = enc.action_at(var)
        parts = name.split("-")
        if name.startswith("move-"):
            src, dst = parts[1], parts[2]
            if src == "L^0":
                i = int(dst.split("_")[1].split("^")[0])
                if t % 2 == 0:
                    mapping[var] = False
                else:
                    rename[var] = x_var(n, i, (t + 1) // 2)
            elif dst == "L^0":
                i = int(src.split("_")[1].split("^")[0])
                if t % 2 == 0:
                    mapping[var] = enc.var(f"move-L^0-{src}", t - 1)
                else:
                    mapping[var] = False
            else:
                mapping[var] = False  # moves along the long branch
        elif name.startswith("NOOP-at-"):
            mapping[var] = False
        elif name.startswith("NOOP-visited-"):
            node = name[len("NOOP-visited-") :]
            if node == "L^0":
                mapping[var] = False
                continue
            i, j = node[2:].split("^")
            i, j = int(i), int(j)
            if j != 1:
                mapping[var] = False
            elif t == last:
                mapping[var] = True
            elif t % 2 == 0:
                mapping[var] = enc.var(name, t + 1)
            elif t >= 3:
                rename[var] = px_var(n, i, (t + 1) // 2)
            else:
                raise TransformError(f"unexpected variable {name}@{t}")
        else:
            raise TransformError(f"unexpected variable {name}@{t}")
    num = n * (n - 1) + n * (n - 2)
    return ReductionFunction(mapping, rename, num, php_names(n, temporal=True))


# -- P2rP ---------------------------------------------------------------------


@dataclass
class TransformStats:
    input_resolutions: int
    output_resolutions: int
    max_step_blowup: int = 0


def transform_proof_reduction(
    proof: ResolutionProof, r: ReductionFunction, target: CnfFormula
) -> Tuple[ResolutionProof, TransformStats]:
    """Rewrite a refutation through r so that it refutes ``target``.

    Each clause C of the input is tracked as trivial (r*(C) satisfied or
    tautological) or by an output step whose clause is a subset of r(C).
    """
    index = _SubsumptionIndex(target)
    out = ResolutionProof()
    axiom_of: Dict[int, int] = {}
    status: List[Optional[int]] = []  # output step, or None when trivial
    for i, step in enumerate(proof.steps):
        rc = r.clause(step.clause)
        if rc is None:
            status.append(None)
            continue
        rset = set(rc)
        if step.is_axiom:
            j = index.find(rc)
            if j is None:
                raise TransformError(f"step {i + 1}: r(C) is not subsumed by the target")
            if j not in axiom_of:
                axiom_of[j] = out.add_axiom(target.clauses[j])
            status.append(axiom_of[j])
            continue
        a, b = step.antecedents
        sa, sb = status[a], status[b]
        if sa is not None and set(out.steps[sa].clause) <= rset:
            status.append(sa)
            continue
        if sb is not None and set(out.steps[sb].clause) <= rset:
            status.append(sb)
            continue
        if sa is None or sb is None:
            raise TransformError(f"step {i + 1}: no usable antecedent")
        piv = r.literal(step.pivot)
        if isinstance(piv, bool):
            raise TransformError(f"step {i + 1}: pivot reduced to a constant")
        new = out.add_resolvent(sa, sb, abs(piv))
        if not set(out.steps[new].clause) <= rset:
            raise TransformError(f"step {i + 1}: resolvent escapes r(C)")
        status.append(new)
    if proof.steps and status[-1] is not None and out.steps[status[-1]].clause == ():
        del out.steps[status[-1] + 1 :]  # later steps cannot feed the final one
    return out, TransformStats(proof.resolution_steps, out.resolution_steps, 1)


# -- t-translation --------------------------------------------------------------


class _TMap:
    """Decode TPHP_n variables and translate literals."""

    def __init__(self, n: int):
        self.n = n
        self.xy: Dict[int, Tuple[int, int]] = {}
        self.pxy: Dict[int, Tuple[int, int]] = {}
        for x in range(1, n + 1):
            for y in range(1, n):
                self.xy[x_var(n, x, y)] = (x, y)
            for y in range(2, n):
                self.pxy[px_var(n, x, y)] = (x, y)

    def lits(self, lit: int) -> List[int]:
        v = abs(lit)
        if v in self.xy:
            return [lit]
        x, y = self.pxy[v]
        if lit > 0:
            return [x_var(self.n, x, j) for j in range(1, y)]
        return [x_var(self.n, x, j) for j in range(y, self.n)]

    def clause(self, clause: Sequence[int]) -> Optional[FrozenSet[int]]:
        """t(C), or None when it is tautological."""
        out = set()
        for l in clause:
            out.update(self.lits(l))
        if any(-l in out for l in out):
            return None
        return frozenset(out)


def t_translate_proof(proof: ResolutionProof, n: int) -> Tuple[ResolutionProof, TransformStats]:
    """Turn a refutation of oTPHP_n (or TPHP_n) into one of ofPHP_n (fPHP_n).

    Every input clause C is tracked by an output clause D with D a subset of
    t(C), or marked tautological when t(C) is.  Steps over x-variables
    resolve or reuse; steps over prefix variables px_y remove the unwanted
    x_j by resolving against functional clauses {-x_i, -x_j}.
    """
    tm = _TMap(n)
    target = ofphp(n)
    index = _SubsumptionIndex(target)
    out = ResolutionProof()
    axiom_cache: Dict[FrozenSet[int], int] = {}

    def axiom(clause) -> int:
        key = frozenset(clause)
        j = index.find(key)
        if j is None:
            raise TransformError(f"{sorted(key)} is not subsumed by ofPHP_{n}")
        full = frozenset(target.clauses[j])
        if full not in axiom_cache:
            axiom_cache[full] = out.add_axiom(full)
        return axiom_cache[full]

    def functional(x: int, i: int, j: int) -> int:
        return axiom((-x_var(n, x, i), -x_var(n, x, j)))

    def cl(step: int) -> FrozenSet[int]:
        return frozenset(out.steps[step].clause)

    status: List[Optional[int]] = []
    max_blowup = 0
    for idx, step in enumerate(proof.steps):
        t3 = tm.clause(step.clause)
        if any(-l in set(step.clause) for l in step.clause):
            raise TransformError(f"step {idx + 1}: tautological input clause")
        if t3 is None:
            status.append(None)
            continue
        if step.is_axiom:
            status.append(axiom(t3))
            continue
        before = out.resolution_steps
        a, b = step.antecedents
        c1, c2 = proof.steps[a].clause, proof.steps[b].clause
        piv = step.pivot
        if piv in c2:  # make c1 the clause with the positive pivot
            a, b, c1, c2 = b, a, c2, c1
        d1, d2 = status[a], status[b]
        if d1 is not None and cl(d1) <= t3:
            status.append(d1)
            continue
        if d2 is not None and cl(d2) <= t3:
            status.append(d2)
            continue
        if piv in tm.xy:
            if d1 is None or d2 is None:
                raise TransformError(f"step {idx + 1}: missing antecedent over x pivot")
            res = out.add_resolvent(d1, d2, piv)
        else:
            x, y = tm.pxy[piv]
            res = _px_step(out, tm, n, x, y, d1, d2, c1, c2, t3, functional)
        if not cl(res) <= t3:
            raise TransformError(f"step {idx + 1}: derived clause escapes t(C)")
        status.append(res)
        max_blowup = max(max_blowup, out.resolution_steps - before)
    if not proof.is_refutation() or status[-1] is None:
        raise TransformError("input is not a refutation")
    del out.steps[status[-1] + 1 :]
    return out, TransformStats(proof.resolution_steps, out.resolution_steps, max_blowup)


def _px_step(out, tm, n, x, y, d1, d2, c1, c2, t3, functional) -> int:
    """Resolution over px_y: c1 holds px_y, c2 holds -px_y."""
    low = {x_var(n, x, i): i for i in range(1, y)}  # t(px_y)
    high = {x_var(n, x, j): j for j in range(y, n)}  # t(-px_y)

    def offenders(step, allowed):
        return sorted((allowed[l] for l in out.steps[step].clause if l in allowed and l not in t3))

    def strip(start: int, offs: Sequence[int], partner: int) -> int:
        """Resolve away x_o (o in offs) using {-x_o, -x_partner}."""
        cur = start
        for o in offs:
            cur = out.add_resolvent(cur, functional(x, o, partner), x_var(n, x, o))
        return cur

    if d1 is None and d2 is None:
        # t(C1) and t(C2) are both tautological: -x_i in C1 (i < y), -x_j in C2 (j >= y)
        i = next(low[-l] for l in c1 if -l in low)
        j = next(high[-l] for l in c2 if -l in high)
        return functional(x, i, j)
    if d1 is None:
        i = next(low[-l] for l in c1 if -l in low)
        return strip(d2, offenders(d2, high), i)
    if d2 is None:
        j = next(high[-l] for l in c2 if -l in high)
        return strip(d1, offenders(d1, low), j)
    off1 = offenders(d1, low)
    off2 = offenders(d2, high)
    d1set = set(out.steps[d1].clause)
    # offenders whose negation already sits in D1 go first, so no resolvent
    # ever holds both x_j and -x_j
    off2.sort(key=lambda j: (-x_var(n, x, j) not in d1set, j))
    cur = d2
    for j in off2:
        e = strip(d1, off1, j)
        cur = out.add_resolvent(cur, e, x_var(n, x, j))
    return cur


# -- the full chain ----------------------------------------------------------------


@dataclass
class PipelineReport:
    n: int
    map_steps: int
    map_resolutions: int
    tphp_resolutions: int
    otphp_resolutions: int
    ofphp_resolutions: int
    max_blowup: int
    checks: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and self.tphp_resolutions <= self.map_resolutions and self.max_blowup <= self.n**2 + self.n


def map_to_ofphp(n: int, proof: Optional[ResolutionProof] = None, **dpll_kwargs) -> PipelineReport:
    """Refute MAP_n^1 with DPLL and carry the proof down to ofPHP_n, checking each stage."""
    from .proofs import refute

    enc = encode(map_task(n, 1), 2 * n - 2)
    if proof is None:
        _, proof = refute(enc, **dpll_kwargs)
    checks = {"map": bool(check_proof(enc, proof))}
    tp, s1 = transform_proof_reduction(proof, map_reduction(n, enc), map_tphp(n))
    checks["mapTPHP"] = bool(check_proof(map_tphp(n), tp))
    op, s2 = transform_proof_reduction(tp, identity_reduction(), otphp(n))
    checks["oTPHP"] = bool(check_proof(otphp(n), op))
    fp, s3 = t_translate_proof(op, n)
    checks["ofPHP"] = bool(check_proof(ofphp(n), fp))
    return PipelineReport(
        n, len(proof), proof.resolution_steps, tp.resolution_steps, op.resolution_steps, fp.resolution_steps,
        s3.max_step_blowup, checks,
    )
