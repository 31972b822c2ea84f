#!/usr/bin/env python3
"""Compare the sieve-size estimate against the actual odd-prime log budget.

For a range of log-sum targets, print the estimated sieve limit and the
directly summed ln(p/(p-1)) budget actually available below it.
"""

import argparse

import numpy as np

from autratio import SieveCapacityError, estimate_sieve_limit, shared_stream


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-target", type=float, default=2.5)
    ap.add_argument("--steps", type=int, default=11)
    args = ap.parse_args()

    stream = shared_stream()
    print(f"{'target':>8}  {'limit':>12}  {'available':>10}  {'margin':>8}")
    for k in range(args.steps):
        t = args.max_target * k / max(args.steps - 1, 1)
        try:
            x = estimate_sieve_limit(t)
        except SieveCapacityError:
            print(f"{t:8.3f}  unreachable under the ceiling")
            continue
        stream.extend_to(x)
        ps = stream.primes_slice(2, stream.count).astype(float)
        ps = ps[ps <= x]
        have = float(np.sum(np.log(ps) - np.log(ps - 1.0)))
        print(f"{t:8.3f}  {x:12d}  {have:10.4f}  {have - t:8.4f}")


if __name__ == "__main__":
    main()
