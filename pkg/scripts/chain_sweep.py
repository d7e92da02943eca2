"""Greedy heuristics against the exact optimum on the two-way chain, for growing n."""

import argparse
import time

from creditfreeze.bailout import greedy, opt_exact
from creditfreeze.generators import CycleChain, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--hi", default="2")
    ap.add_argument("--lo", default="1")
    args = ap.parse_args()
    strategies = ("greedy_cost", "greedy_flow", "greedy_shortfall")
    print("n\texact\t" + "\t".join(strategies) + "\tseconds")
    for n in range(3, args.n_max + 1):
        net = generate(CycleChain(n, args.hi, args.lo))
        t = time.perf_counter()
        best = opt_exact(net).total
        secs = time.perf_counter() - t
        row = [str(greedy(net, s).total) for s in strategies]
        print(f"{n}\t{best}\t" + "\t".join(row) + f"\t{secs:.3f}")


if __name__ == "__main__":
    main()
