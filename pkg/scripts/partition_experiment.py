"""Bailout decision on partition-derived stars versus a subset-sum check, with solve times."""

import argparse
import time

from creditfreeze.bailout import opt_decision
from creditfreeze.corpus import has_equal_partition, partition_multisets, partition_spec
from creditfreeze.generators import generate, partition_budget


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()
    agree = 0
    print("size\tpartition\tdecision\tseconds\tmultiset")
    for ms in partition_multisets(args.count, args.seed):
        spec = partition_spec(ms)
        t = time.perf_counter()
        got = opt_decision(generate(spec), partition_budget(spec))
        secs = time.perf_counter() - t
        want = has_equal_partition(ms)
        agree += got == want
        print(f"{len(ms)}\t{want}\t{got}\t{secs:.3f}\t{ms}")
    print(f"agreement {agree}/{args.count}")


if __name__ == "__main__":
    main()
