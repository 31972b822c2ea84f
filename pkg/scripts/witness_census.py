#!/usr/bin/env python3
"""Census of exact hits: which small rationals have a witness f(G) = a?

Scans every rational a = n/d with numerator and denominator up to a bound
and reports, for each, the smallest witness within the order bounds, or
marks it unresolved *within those bounds* (saying nothing beyond them).

Example:
    python scripts/witness_census.py --max-num 8 --max-den 8 --max-order 400
"""

import argparse
from fractions import Fraction
from math import gcd

from autratio import SearchBounds, find_exact, format_group, order


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-num", type=int, default=8)
    ap.add_argument("--max-den", type=int, default=8)
    ap.add_argument("--max-order", type=int, default=400)
    args = ap.parse_args()

    bounds = SearchBounds(max_order=args.max_order)
    found, unresolved = 0, []
    for d in range(1, args.max_den + 1):
        for n in range(1, args.max_num + 1):
            if gcd(n, d) != 1:
                continue
            a = Fraction(n, d)
            hits = find_exact(a, bounds)
            if hits:
                g = hits[0].group
                print(f"f = {a}: {format_group(g)} (order {order(g)})"
                      + (f"  [+{len(hits)-1} more]" if len(hits) > 1 else ""))
                found += 1
            else:
                unresolved.append(a)
    print(f"\n{found} rationals witnessed; "
          f"{len(unresolved)} unresolved within max_order={args.max_order}:")
    print("  " + ", ".join(str(a) for a in unresolved))


if __name__ == "__main__":
    main()
