"""A tiny backdoor that explains why asymmetric MAP instances are easy.

MAP with k = 2n-3 asks for one far-away location on the long branch.  Three
well-chosen variables (for n = 8) already force unit propagation into a
conflict under every assignment, so DPLL branching on them first needs
only 7 nodes.
"""

from asymsat.backdoors import known_backdoor, minimality_report, verify_backdoor
from asymsat.dpll import dpll


def main(n=8):
    spec = known_backdoor("map-asym", n)
    f = spec.formula
    print(f"MAP({n},{2 * n - 3}) at bound {2 * n - 2}: {f.num_vars} variables, {f.num_clauses} clauses")
    print("backdoor:", ", ".join(spec.names))

    rep = verify_backdoor(f, spec.variables)
    print(f"assignments checked: {rep.total}, UP-consistent: {rep.consistent}")

    for e in minimality_report(f, spec.variables):
        print(f"  without {e.name}: {e.consistent} UP-consistent assignment(s) remain")

    order = sorted(spec.variables, key=lambda v: (f.action_at(v)[1], v))
    print("guided DPLL tree size:", dpll(f, branching=order).nodes)
    print("unguided DPLL tree size:", dpll(f).nodes)


if __name__ == "__main__":
    main()
