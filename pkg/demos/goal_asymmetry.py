"""How goal asymmetry shows up in DPLL search effort.

For MAP and SBW at fixed n we sweep k, print the AsymRatio of each task and
the size of an unguided DPLL tree on the "one step too short" encoding.
High AsymRatio means one subgoal already needs almost the whole plan; the
search finds that out quickly.
"""

import argparse

from asymsat.domains import map_task, sbw_task
from asymsat.dpll import NodeLimitExceeded, dpll
from asymsat.encoding import encode
from asymsat.planning import asym_ratio, cost


def sweep(label, tasks, limit):
    print(f"\n{label}")
    print(f"{'k':>3} {'AsymRatio':>10} {'vars':>6} {'nodes':>9}")
    for k, task in tasks:
        m = cost(task)
        enc = encode(task, m - 1)
        try:
            nodes = str(dpll(enc, node_limit=limit).nodes)
        except NodeLimitExceeded:
            nodes = f">{limit}"
        r = asym_ratio(task)
        print(f"{k:>3} {str(r):>10} {enc.num_vars:>6} {nodes:>9}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--limit", type=int, default=100_000)
    args = ap.parse_args()
    n = args.n
    sweep(f"MAP, n={n}", [(k, map_task(n, k)) for k in range(1, 2 * n - 2, 2)], args.limit)
    sweep(f"SBW, n={n}", [(k, sbw_task(n, k)) for k in range(0, n - 1)], args.limit)


if __name__ == "__main__":
    main()
