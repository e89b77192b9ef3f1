"""Constraint graphs, clique-based cycle-cutset lower bounds and batch reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .backdoors import known_backdoor
from .cnf import CnfFormula
from .domains import InstanceSpec, map_task, sbw_task
from .dpll import NodeLimitExceeded, dpll
from .encoding import EncodedCnf, encode, is_noop
from .pigeons import sph, sph_var
from .planning import PlanningTask, asym_ratio, cost

REPORT_SCHEMA = "asymsat-report-v1"


def constraint_graph(formula: CnfFormula) -> nx.Graph:
    """Variables as nodes; an edge whenever two variables share a clause."""
    g = nx.Graph()
    g.add_nodes_from(range(1, formula.num_vars + 1))
    for c in formula.clauses:
        vs = sorted({abs(l) for l in c})
        if len(vs) > 1:
            g.add_edges_from(combinations(vs, 2))
    return g


class CliqueVerificationError(AssertionError):
    pass


@dataclass
class Clique:
    label: str
    variables: Tuple[int, ...]


@dataclass
class CutsetBoundReport:
    """Lower bound via disjoint cliques: a cycle-cutset keeps at most two
    nodes of every clique."""

    family: str
    n: int
    k: int
    cliques: List[Clique] = field(default_factory=list)
    # any UP backdoor is a conditional cutset; whether smaller ones exist is open
    up_cutset_at_most: Optional[int] = None

    @property
    def bound(self) -> int:
        return sum(max(len(c.variables) - 2, 0) for c in self.cliques)

    @property
    def closed_form(self) -> Optional[int]:
        return cutset_closed_form(self.family, self.n, self.k)


def cutset_closed_form(family: str, n: int, k: int) -> Optional[int]:
    if family == "map":
        return 6 * n * n - 13 * n + 7
    if family == "sph":
        return n * n - 2 * n
    if family == "sbw":
        if k == 0:
            return n**3 - 2 * n * n - 2 * n + 4
        if k == n - 2:
            return (n * n + n - 12) // 2
        return sum((n - k) ** 2 + t - 2 for t in range(2, k + 1)) + sum(
            (n - k) ** 2 + k - 2 for t in range(max(2, k + 2), n)
        )
    return None


def verify_cliques(graph: nx.Graph, cliques: Sequence[Clique]) -> None:
    seen = set()
    for c in cliques:
        for u, v in combinations(c.variables, 2):
            if not graph.has_edge(u, v):
                raise CliqueVerificationError(f"{c.label}: {u} and {v} are not adjacent")
        overlap = seen & set(c.variables)
        if overlap:
            raise CliqueVerificationError(f"{c.label} overlaps an earlier clique in {sorted(overlap)}")
        seen |= set(c.variables)


def _map_cliques(enc: EncodedCnf, n: int) -> List[Clique]:
    """Per-step cliques of pairwise exclusive moves.

    The nominal clique at step t has 2n+t-1 members.  Step 1 really has only
    n moves (plus NOOP-at-L^0, which every move there deletes), so the
    shortfall is carried over to later steps, whose move cliques are larger
    than nominal.  The sum of (size - 2) is unchanged.
    """
    bound = 2 * n - 2
    per_step = {t: [] for t in range(1, bound + 1)}
    for (name, t), v in enc.var_of.items():
        if not is_noop(name):
            per_step[t].append(v)
    per_step[1].append(enc.var("NOOP-at-L^0", 1))
    cliques = []
    carry = 0
    for t in range(1, bound + 1):
        avail = sorted(per_step[t])
        want = 2 * n + t - 1 + carry
        take = min(len(avail), want)
        carry = want - take
        cliques.append(Clique(f"step {t}", tuple(avail[:take])))
    if carry:
        raise CliqueVerificationError(f"MAP n={n}: {carry} clique members could not be placed")
    return cliques


def _sbw_cliques(enc: EncodedCnf, n: int, k: int) -> List[Clique]:
    good = ["t_2"] + [f"g_{i}" for i in range(1, n - k + 1)]
    cliques = []
    steps = [(t, t) for t in range(2, k + 1)] + [(t, k) for t in range(max(2, k + 2), n)]
    for t, bad_count in steps:
        names = [f"movetot2-{x}-{y}" for x in good[1:] for y in good if y != x]
        if bad_count >= 1:
            names.append("movetot2-b_1-t_2")
        names += [f"movetot2-b_{i}-b_{i - 1}" for i in range(2, bad_count + 1)]
        cliques.append(Clique(f"step {t}", tuple(enc.var(a, t) for a in names)))
    return cliques


def _sph_cliques(n: int) -> List[Clique]:
    return [Clique(f"hole {y}", tuple(sph_var(n, x, y) for x in range(1, n + 1))) for y in range(1, n + 1)]


def cutset_lower_bound(family: str, n: int, k: Optional[int] = None, formula: Optional[CnfFormula] = None) -> CutsetBoundReport:
    """Build the witness cliques for a family, check them against the real
    constraint graph and sum up (size - 2)."""
    fam = family.lower()
    if fam == "map":
        k = 1 if k is None else k
        f = formula or encode(map_task(n, k), 2 * n - 2)
        cliques = _map_cliques(f, n)
    elif fam == "sbw":
        k = 0 if k is None else k
        if not 0 <= k <= n - 2:
            raise ValueError("SBW cutset bound needs 0 <= k <= n-2")
        f = formula or encode(sbw_task(n, k), n - 1)
        cliques = _sbw_cliques(f, n, k)
    elif fam == "sph":
        k = 1 if k is None else k
        f = formula or sph(n, k)
        cliques = _sph_cliques(n)
    else:
        raise ValueError(f"unknown family {family!r}")
    verify_cliques(constraint_graph(f), cliques)
    return CutsetBoundReport(fam, n, k, cliques, _backdoor_size(fam, n, k, f))


def _backdoor_size(fam: str, n: int, k: int, f: CnfFormula) -> Optional[int]:
    name = {("map", 1): "map-sym", ("sbw", 0): "sbw-sym", ("sbw", n - 2): "sbw-asym"}.get((fam, k))
    if fam == "sph" and 1 <= k <= n - 1:
        name = "sph"
    if name is None or (name.startswith("sbw") and n < 3):
        return None
    return len(known_backdoor(name, n, k, formula=f))


# -- batch report ------------------------------------------------------------------

COLUMNS = [
    REPORT_SCHEMA, "n", "k", "m", "bound", "asym_ratio", "asym_ratio_value",
    "dpll_nodes", "dpll_depth", "size_depth_ratio", "guided_nodes", "error",
]


def _guided(spec: InstanceSpec, enc: EncodedCnf) -> Optional[int]:
    fam = {("map", 1): "map-sym", ("map", 2 * spec.n - 3): "map-asym", ("sbw", 0): "sbw-sym", ("sbw", spec.n - 2): "sbw-asym"}
    name = fam.get((spec.family, spec.k))
    if name is None or (name.startswith("sbw") and spec.n < 3):
        return None
    bd = known_backdoor(name, spec.n, formula=enc)
    order = sorted(bd.variables, key=lambda v: (enc.action_at(v)[1], v))
    return dpll(enc, branching=order).nodes


def report_rows(
    instances: Iterable[Union[InstanceSpec, Tuple[str, int, int]]],
    b_policy: str = "m-1",
    node_limit: Optional[int] = 200_000,
    fallback: str = "occurrence",
    seed: int = 0,
) -> List[dict]:
    rows = []
    for item in instances:
        spec = item if isinstance(item, InstanceSpec) else InstanceSpec(*item)
        row = {c: "" for c in COLUMNS}
        row.update({REPORT_SCHEMA: spec.label, "n": spec.n, "k": spec.k})
        try:
            task = spec.task()
            m = cost(task)
            worst = max(cost(task, {g}) for g in task.goal)
            b = m - 1 if b_policy == "m-1" else m
            row.update({"m": m, "bound": b, "asym_ratio": f"{worst}/{m}", "asym_ratio_value": f"{worst / m:.6f}"})
            enc = encode(task, b)
            tree = dpll(enc, fallback=fallback, seed=seed, node_limit=node_limit)
            row.update({"dpll_nodes": tree.nodes, "dpll_depth": tree.depth, "size_depth_ratio": f"{tree.size_depth_ratio:.3f}"})
            g = _guided(spec, enc)
            row["guided_nodes"] = "" if g is None else g
        except NodeLimitExceeded as e:
            row["error"] = f"node-limit {e.limit}"
        except Exception as e:  # one bad row must not sink the batch
            row["error"] = f"{type(e).__name__}: {e}"
        rows.append(row)
    fam_order = {"map": 0, "sbw": 1, "redherring": 2}
    rows.sort(key=lambda r: (fam_order.get(r[REPORT_SCHEMA].split("-")[0], 9), r["n"], r["k"]))
    return rows


def report_batch(instances, b_policy: str = "m-1", **kwargs) -> str:
    """CSV text: header row (first cell names the schema version), then one row per instance."""
    rows = report_rows(instances, b_policy, **kwargs)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def asym_ratio_of(spec: InstanceSpec) -> Fraction:
    return asym_ratio(spec.task())
