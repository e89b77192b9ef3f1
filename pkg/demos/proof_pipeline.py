"""Carrying a MAP refutation down to a pigeonhole refutation.

A DPLL refutation of the symmetric MAP instance is turned into one for
mapTPHP by a variable substitution, relaxed to oTPHP and then rewritten
into ofPHP.  Each stage is run through the proof checker.  Resolution
lower bounds for ofPHP therefore carry back to MAP.
"""

import sys

from asymsat.reductions import map_to_ofphp


def main(ns=(3, 4)):
    for n in ns:
        rep = map_to_ofphp(n)
        print(f"n={n}")
        print(f"  MAP refutation:    {rep.map_resolutions:>6} resolutions")
        print(f"  mapTPHP refutation:{rep.tphp_resolutions:>6}")
        print(f"  oTPHP refutation:  {rep.otphp_resolutions:>6}")
        print(f"  ofPHP refutation:  {rep.ofphp_resolutions:>6}  (largest per-step blowup {rep.max_blowup})")
        print("  checks:", ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in rep.checks.items()))


if __name__ == "__main__":
    main(tuple(int(a) for a in sys.argv[1:]) or (3, 4))
