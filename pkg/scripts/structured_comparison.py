"""Closed-form structured policies versus the exact solver on the seeded families.

For core-periphery networks the richest-first rule and the optimised core order are
both reported, together with the worst relative overshoot of the former.
"""

import argparse
import time
from fractions import Fraction

from creditfreeze.bailout import greedy, opt_exact
from creditfreeze.corpus import structured_instances
from creditfreeze.structured import (
    core_periphery_optimal_policy,
    core_periphery_policy,
    disjoint_cycles_policy,
    star_policy,
)

POLICIES = {
    "disjoint_cycles": [("closed form", disjoint_cycles_policy)],
    "star": [("closed form", star_policy)],
    "core_periphery": [("richest first", core_periphery_policy), ("ordered cores", core_periphery_optimal_policy)],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for family, policies in POLICIES.items():
        nets = structured_instances(family, args.count, args.n_max, args.seed)
        t = time.perf_counter()
        exact = [opt_exact(net).total for net in nets]
        print(f"\n{family}: {len(nets)} instances, n <= {args.n_max}, exact solver {time.perf_counter() - t:.2f}s")
        contenders = policies + [("greedy_cost", lambda net: greedy(net, "greedy_cost"))]
        for name, fn in contenders:
            totals = [fn(net).total for net in nets]
            worse = [(got, best) for got, best in zip(totals, exact) if got != best]
            ratio = max((got / best for got, best in worse if best), default=Fraction(1))
            print(f"  {name:<14} mismatches {len(worse):>3}/{len(nets)}  worst ratio {float(ratio):.3f}")


if __name__ == "__main__":
    main()
