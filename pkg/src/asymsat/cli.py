"""Command-line front end.

Exit codes: 0 success, 1 a checked property does not hold (not a backdoor,
proof rejected, bound mismatch), 2 bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import List, Optional, Sequence

from . import analysis, backdoors, pigeons
from .cnf import CnfFormula, read_dimacs
from .domains import build_task
from .dpll import NodeLimitExceeded, dpll
from .encoding import decode_plan, encode
from .planning import PlanningError, cost, subgoal_costs
from .proofs import check_proof, extract_resolution, read_proof, write_proof
from .reductions import (
    TransformError,
    apply_reduction,
    map_reduction,
    parse_reduction,
    t_translate_proof,
)
from .taskio import dump_task, read_task, to_pddl

OK, VIOLATION, USAGE = 0, 1, 2

PLANNING = ("map", "sbw", "redherring")
PHP_FORMULAS = {
    "php": pigeons.php,
    "fphp": pigeons.fphp,
    "ophp": pigeons.ophp,
    "ofphp": pigeons.ofphp,
    "tphp": pigeons.tphp,
    "otphp": pigeons.otphp,
    "maptphp": pigeons.map_tphp,
}


class UsageError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_formula(f: CnfFormula, out: Optional[str], symbols: Optional[str], comments=()) -> None:
    _emit(f.to_dimacs(comments), out)
    if symbols:
        with open(symbols, "w") as fh:
            fh.write(f.symbol_map())


def _task_from_args(args):
    if getattr(args, "task", None):
        return read_task(args.task)
    if args.family is None or args.n is None:
        raise UsageError("give --task FILE or --family with --n")
    k = args.k if args.k is not None else (0 if args.family == "sbw" else 1)
    return build_task(args.family, args.n, k)


def _bound(args, task) -> int:
    if args.bound is not None:
        return args.bound
    return cost(task) - 1


def _pigeon_formula(name: str, n: int, k: Optional[int]) -> CnfFormula:
    if name == "sph":
        if k is None:
            raise UsageError("sph needs --k")
        return pigeons.sph(n, k)
    return PHP_FORMULAS[name](n)


def _formula_from_args(args) -> CnfFormula:
    """--cnf FILE, a pigeon formula name, or a planning family (encoded at --bound)."""
    if getattr(args, "cnf", None):
        return read_dimacs(args.cnf, getattr(args, "symbols_in", None))
    fam = args.family
    if fam is None or args.n is None:
        raise UsageError("give --cnf FILE or --family with --n")
    if fam in PHP_FORMULAS or fam == "sph":
        return _pigeon_formula(fam, args.n, args.k)
    task = _task_from_args(args)
    return encode(task, _bound(args, task))


# -- verbs ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.family in PLANNING:
        k = args.k if args.k is not None else (0 if args.family == "sbw" else 1)
        task = build_task(args.family, args.n, k)
        if args.pddl:
            dom, prob = to_pddl(task)
            _emit(dom, args.pddl + "-domain.pddl")
            _emit(prob, args.pddl + "-problem.pddl")
        _emit(dump_task(task), args.out)
        return OK
    f = _pigeon_formula(args.family, args.n, args.k)
    _write_formula(f, args.out, args.symbols)
    return OK


def cmd_encode(args) -> int:
    task = _task_from_args(args)
    b = _bound(args, task)
    enc = encode(task, b, mutex=args.mutex)
    _write_formula(enc, args.out, args.symbols, [f"{task.name or 'task'} bound {b}"])
    return OK


def cmd_export_dimacs(args) -> int:
    f = _formula_from_args(args)
    _write_formula(f, args.out, args.symbols)
    return OK


def cmd_asymratio(args) -> int:
    task = _task_from_args(args)
    per = subgoal_costs(task)
    m = cost(task)
    worst = max(per.values())
    lines = [f"{g}\t{c}" for g, c in sorted(per.items())]
    lines.append(f"m\t{m}")
    lines.append(f"asymratio\t{worst}/{m}\t{worst / m:.6f}")
    _emit("\n".join(lines) + "\n", args.out)
    return OK


def _read_vars(path: str, f: CnfFormula) -> List[int]:
    out = []
    with open(path) as fh:
        for raw in fh:
            for tok in raw.split("#", 1)[0].split():
                out.append(int(tok) if tok.lstrip("-").isdigit() else f.index_of(tok))
    return out


def cmd_solve(args) -> int:
    f = _formula_from_args(args)
    guide = _read_vars(args.branch_vars, f) if args.branch_vars else ()
    tree = dpll(f, branching=guide, fallback=args.fallback, seed=args.seed, node_limit=args.node_limit)
    lines = [
        f"result\t{'SAT' if tree.satisfiable else 'UNSAT'}",
        f"nodes\t{tree.nodes}",
        f"depth\t{tree.depth}",
        f"size_depth_ratio\t{tree.size_depth_ratio:.3f}",
    ]
    if tree.satisfiable and hasattr(f, "var_of"):
        for i, step in enumerate(decode_plan(f, tree.model), 1):
            lines.append(f"step {i}\t" + " ".join(step))
    elif not tree.satisfiable and args.proof_out:
        proof = extract_resolution(tree, f)
        write_proof(proof, args.proof_out)
        lines.append(f"proof\t{len(proof)} steps, {proof.resolution_steps} resolutions")
    _emit("\n".join(lines) + "\n", args.out)
    return OK


def _backdoor_target(args):
    if args.vars_file:
        f = _formula_from_args(args)
        return f, _read_vars(args.vars_file, f)
    if args.family not in backdoors.FAMILIES:
        raise UsageError(f"--family must be one of {', '.join(backdoors.FAMILIES)} (or give --vars-file)")
    spec = backdoors.known_backdoor(args.family, args.n, args.k)
    return spec.formula, list(spec.variables)


def _table(rows: Sequence[dict], csv_path: Optional[str]) -> str:
    cols = list(rows[0]) if rows else []
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
    lines += ["  ".join(str(r[c]).ljust(widths[c]) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_backdoor(args) -> int:
    if args.action == "search":
        f = _formula_from_args(args)
        res = backdoors.search_optimal(f, args.max_size, budget=args.budget)
        sizes = ",".join(str(s) for s in res.checked_sizes)
        if res.backdoor is None:
            _emit(f"no backdoor of size <= {args.max_size}\tchecked sizes {sizes}\tdecisions {res.decisions}\n", args.out)
        else:
            names = " ".join(f.name_of(v) for v in res.backdoor)
            _emit(f"size {len(res.backdoor)}\t{names}\tdecisions {res.decisions}\n", args.out)
        return OK
    f, B = _backdoor_target(args)
    if args.action == "verify":
        mode = "sample" if args.sample else "exhaustive"
        rep = backdoors.verify_backdoor(f, B, mode=mode, samples=args.sample or 0, seed=args.seed, workers=args.workers)
        row = {"size": len(B), "mode": rep.mode, "checked": rep.total, "conflicts": rep.conflicts,
               "consistent": rep.consistent, "backdoor": "yes" if rep.is_backdoor else "no"}
        _emit(_table([row], args.csv), args.out)
        return OK if rep.is_backdoor else VIOLATION
    entries = backdoors.minimality_report(f, B, count=not args.exists_only)
    rows = [{"removed": e.name, "var": e.variable, "consistent": e.consistent} for e in entries]
    _emit(_table(rows, args.csv), args.out)
    return OK if all(e.consistent > 0 for e in entries) else VIOLATION


def cmd_reduce(args) -> int:
    f = read_dimacs(args.formula, args.symbols_in)
    if args.rules == "map":
        if args.n is None:
            raise UsageError("--rules map needs --n")
        enc = encode(build_task("map", args.n, 1), 2 * args.n - 2)
        if enc.clause_set() != f.clause_set():
            raise UsageError("--rules map applies to the MAP_n^1 encoding at bound 2n-2 only")
        r = map_reduction(args.n, enc)
    else:
        with open(args.rules) as fh:
            r = parse_reduction(fh.read())
    _write_formula(apply_reduction(f, r), args.out, args.symbols)
    return OK


def cmd_translate_proof(args) -> int:
    if (args.src, args.dst) not in (("tphp", "fphp"), ("otphp", "ofphp"), ("tphp", "ofphp")):
        raise UsageError("supported: --from tphp|otphp --to fphp|ofphp")
    proof = read_proof(args.proof)
    source = pigeons.tphp(args.n) if args.src == "tphp" else pigeons.otphp(args.n)
    pre = check_proof(source, proof)
    if not pre:
        print(f"input proof rejected at step {pre.failed_step}: {pre.reason}", file=sys.stderr)
        return VIOLATION
    out, stats = t_translate_proof(proof, args.n)
    target = pigeons.fphp(args.n) if args.dst == "fphp" else pigeons.ofphp(args.n)
    post = check_proof(target, out)
    _emit(out.to_text(), args.out)
    print(
        f"resolutions {stats.input_resolutions} -> {stats.output_resolutions}, max blowup {stats.max_step_blowup}, "
        f"check {'ok' if post else 'FAILED'}",
        file=sys.stderr,
    )
    return OK if post and stats.max_step_blowup <= args.n**2 + args.n else VIOLATION


def cmd_check_proof(args) -> int:
    f = read_dimacs(args.cnf)
    res = check_proof(f, read_proof(args.proof), mode=args.mode)
    if res:
        print("proof ok")
        return OK
    print(f"proof rejected at step {res.failed_step}: {res.reason}")
    return VIOLATION


def cmd_cutset(args) -> int:
    try:
        rep = analysis.cutset_lower_bound(args.family, args.n, args.k)
    except analysis.CliqueVerificationError as e:
        print(f"clique verification failed: {e}", file=sys.stderr)
        return VIOLATION
    lines = [f"{c.label}\t{len(c.variables)}" for c in rep.cliques]
    lines.append(f"lower bound via disjoint cliques\t{rep.bound}")
    lines.append(f"closed form\t{rep.closed_form}")
    if rep.up_cutset_at_most is not None:
        lines.append(f"conditional cutset with UP\t<= {rep.up_cutset_at_most} (known backdoor)")
    _emit("\n".join(lines) + "\n", args.out)
    return OK if rep.bound == rep.closed_form else VIOLATION


def _int_list(text: str) -> List[int]:
    out = []
    for part in text.split(","):
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_report(args) -> int:
    specs = []
    for n in _int_list(args.n):
        ks = _int_list(args.k) if args.k else ([0] if args.family == "sbw" else [1])
        specs += [(args.family, n, k) for k in ks]
    text = analysis.report_batch(
        specs, args.b_policy, node_limit=args.node_limit, fallback=args.fallback, seed=args.seed
    )
    _emit(text, args.out)
    return OK


# -- parser ----------------------------------------------------------------------


def _family_args(p, families, k_help="k parameter"):
    p.add_argument("--family", choices=families)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, help=k_help)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asymsat", description="Goal asymmetry, SAT encodings, backdoors and proofs.")
    sub = ap.add_subparsers(dest="verb", required=True)
    all_formulas = list(PLANNING) + list(PHP_FORMULAS) + ["sph"]

    p = sub.add_parser("gen", help="generate a planning task or a pigeonhole formula")
    p.add_argument("family", choices=all_formulas)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.add_argument("--symbols", help="symbol map path (formulas only)")
    p.add_argument("--pddl", metavar="PREFIX", help="also write PREFIX-domain.pddl and PREFIX-problem.pddl")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="encode a task as CNF for a step bound")
    p.add_argument("--task")
    _family_args(p, PLANNING)
    p.add_argument("--bound", type=int, help="step bound (default: optimal cost - 1)")
    p.add_argument("--mutex", choices=("strict", "interference"), default="strict")
    p.add_argument("--out")
    p.add_argument("--symbols")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("export-dimacs", help="write any supported formula as DIMACS")
    p.add_argument("--cnf")
    p.add_argument("--symbols-in")
    p.add_argument("--task")
    _family_args(p, all_formulas)
    p.add_argument("--bound", type=int)
    p.add_argument("--out")
    p.add_argument("--symbols")
    p.set_defaults(func=cmd_export_dimacs)

    p = sub.add_parser("asymratio", help="subgoal costs and AsymRatio of a task")
    p.add_argument("--task")
    _family_args(p, PLANNING)
    p.add_argument("--out")
    p.set_defaults(func=cmd_asymratio)

    p = sub.add_parser("solve", help="run DPLL; optionally write a resolution refutation")
    p.add_argument("--cnf")
    p.add_argument("--symbols-in")
    p.add_argument("--task")
    _family_args(p, all_formulas)
    p.add_argument("--bound", type=int)
    p.add_argument("--branch-vars", help="file of variables (index or name) to branch on first")
    p.add_argument("--fallback", choices=("occurrence", "first", "random"), default="occurrence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--proof-out")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("backdoor", help="verify, test minimality of, or search for UP backdoors")
    p.add_argument("action", choices=("verify", "minimal", "search"))
    p.add_argument("--family", help=f"one of {', '.join(backdoors.FAMILIES)}, or a formula family with --vars-file/search")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--cnf")
    p.add_argument("--symbols-in")
    p.add_argument("--task")
    p.add_argument("--bound", type=int)
    p.add_argument("--vars-file")
    p.add_argument("--sample", type=int, default=0, help="sample N assignments instead of enumerating")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exists-only", action="store_true", help="minimality: stop counting at 1")
    p.add_argument("--max-size", type=int, default=2)
    p.add_argument("--budget", type=int)
    p.add_argument("--csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_backdoor)

    p = sub.add_parser("reduce", help="apply a reduction function to a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--symbols-in")
    p.add_argument("--rules", required=True, help="'map' or a rules file")
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.add_argument("--symbols")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("translate-proof", help="t-translate a TPHP refutation into an fPHP refutation")
    p.add_argument("--from", dest="src", default="tphp")
    p.add_argument("--to", dest="dst", default="fphp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_translate_proof)

    p = sub.add_parser("check-proof", help="check a resolution proof against a DIMACS formula")
    p.add_argument("--cnf", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--mode", choices=("exact", "subsumed"), default="exact")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("cutset", help="cycle-cutset lower bound via disjoint cliques")
    p.add_argument("--family", choices=("map", "sbw", "sph"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cutset)

    p = sub.add_parser("report", help="CSV batch report over (n, k)")
    p.add_argument("--family", choices=PLANNING, required=True)
    p.add_argument("--n", required=True, help="list like 3,4 or 3-6")
    p.add_argument("--k", help="list like 1,3,5 or 0-4")
    p.add_argument("--b-policy", choices=("m-1", "m"), default="m-1")
    p.add_argument("--node-limit", type=int, default=200_000)
    p.add_argument("--fallback", choices=("occurrence", "first", "random"), default="occurrence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as e:
        # ValueError covers bad parameters, malformed files and size caps
        print(f"asymsat {args.verb}: {e}", file=sys.stderr)
        return USAGE
    except (NodeLimitExceeded, PlanningError, backdoors.BudgetExceeded) as e:
        print(f"asymsat {args.verb}: {e}", file=sys.stderr)
        return VIOLATION
    except TransformError as e:
        print(f"asymsat {args.verb}: transformation failed: {e}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
