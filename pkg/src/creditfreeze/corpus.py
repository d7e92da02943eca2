"""Named instances and seeded instance families used by the acceptance suite and scripts.

Every family is a pure function of its seed, so the checked-in documents under
``networks/`` can be regenerated and compared exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .generators import CorePeripherySpec, CycleChain, FromPartition, RandomSpec, StarSpec, Wheel, generate
from .network import ZERO, CanonicalCosts, FinancialNetwork, FullCosts, build_network

HALF = Fraction(1, 2)


def linked_pairs() -> FinancialNetwork:
    """Three banks; bank 2 sits on two reciprocal pairs and only bank 1 can pay unaided."""
    return build_network([1, 0, 0], [(1, 2, 1), (2, 1, 1), (2, 3, 1), (3, 2, 1)], costs=CanonicalCosts(HALF, ZERO))


def three_equilibria() -> FinancialNetwork:
    """Four banks whose full-cost clearing has a best, an intermediate and a worst equilibrium."""
    return build_network(
        [0, 1, 1, 0],
        [(1, 2, 1), (2, 1, 1), (2, 3, Fraction(3, 4)), (3, 2, Fraction(1, 4)), (3, 4, 1), (4, 3, 1)],
        costs=FullCosts(),
    )


def ladder() -> FinancialNetwork:
    """Bank 1 feeds a row of overlapping reciprocal pairs 2-3, 3-4 and 4-5."""
    q = Fraction(1, 4)
    return build_network(
        [0, 0, 1, 1, 0],
        [(1, 2, 1), (2, 3, 2), (3, 2, 1), (3, 4, 3 * q), (4, 3, q), (4, 5, 1), (5, 4, 1)],
    )


def two_way_chain(n: int) -> FinancialNetwork:
    """Line of banks owing 2 forward and 1 back; cheapest-first greedy bails every bank."""
    return generate(CycleChain(n, Fraction(2), Fraction(1)))


def star_golden() -> FinancialNetwork:
    return generate(StarSpec(4, Fraction(2), Fraction(1), (HALF, HALF, HALF, ZERO)))


def wheel(n: int, a: Fraction, p: Fraction) -> FinancialNetwork:
    return generate(Wheel(n, Fraction(1), p), costs=CanonicalCosts(a, ZERO))


WHEEL_SIZES = (3, 5, 8)
WHEEL_RATES = (Fraction(1, 4), HALF, Fraction(3, 4))
WHEEL_GRID = (ZERO, Fraction(1, 4), HALF, Fraction(3, 4), Fraction(9, 10), Fraction(1), Fraction(11, 10), Fraction(5, 4), Fraction(3, 2))


def wheel_grid(a: Fraction) -> tuple:
    """Holdings swept across the threshold ``a * D`` (D = 1)."""
    return tuple(a * g for g in WHEEL_GRID)


# ---------------------------------------------------------------------------
# random weakly balanced families


def prop2_instances(count: int = 200, seed: int = 2026) -> list:
    """Weakly balanced random networks with n <= 8 under full costs."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        spec = RandomSpec(
            n=rng.randint(2, 8),
            density=rng.choice((0.2, 0.3, 0.45)),
            amount_range=(1, 4),
            p_range=(0, rng.choice((0, 1, 2))),
            seed=rng.randrange(2**31),
            balance="weak",
        )
        out.append(generate(spec, costs=FullCosts()))
    return out


def oracle_instances(count: int = 100, seed: int = 7) -> list:
    """Weakly balanced random networks with n <= 7; a fifth of them exactly balanced."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        spec = RandomSpec(
            n=rng.randint(2, 7),
            density=rng.choice((0.25, 0.35, 0.5)),
            amount_range=(1, 4),
            p_range=(0, 1),
            seed=rng.randrange(2**31),
            balance="exact" if k % 5 == 0 else "weak",
        )
        out.append(generate(spec, costs=FullCosts()))
    return out


def compression_instances(count: int = 100, seed: int = 13) -> list:
    rng = random.Random(seed)
    return [
        generate(RandomSpec(n=rng.randint(2, 10), density=rng.choice((0.2, 0.4, 0.6)), amount_range=(1, 6),
                            p_range=(0, 3), seed=rng.randrange(2**31), balance="none"))
        for _ in range(count)
    ]


# ---------------------------------------------------------------------------
# structured families (all weakly balanced, no outside liabilities, no bank solvent on its own)


def _frac(rng, lo: Fraction, hi: Fraction, den: int = 4) -> Fraction:
    """Uniform on the grid of step 1/den in [lo, hi)."""
    a = int(lo * den) + (1 if lo * den != int(lo * den) else 0)
    b = int(hi * den) - (1 if hi * den == int(hi * den) else 0)
    return Fraction(rng.randint(a, max(a, b)), den)


def random_disjoint_cycles(rng: random.Random, n_max: int) -> FinancialNetwork:
    """Vertex-disjoint cycles chained by forward edges, plus a few acyclic banks."""
    cycles, bank = [], 0
    budget = n_max
    while budget >= 2 and (not cycles or rng.random() < 0.7):
        size = rng.randint(2, min(5, budget))
        cycles.append(list(range(bank + 1, bank + size + 1)))
        bank += size
        budget -= size
    extras = rng.randint(0, min(budget, 2))
    n = bank + extras
    debts = {}
    for c in cycles:
        for t in range(len(c)):
            debts[(c[t], c[(t + 1) % len(c)])] = Fraction(rng.randint(1, 4))
    owner = {b: k for k, c in enumerate(cycles) for b in c}
    for _ in range(rng.randint(0, 2 * len(cycles))):
        i, j = rng.randint(1, n), rng.randint(1, n)
        ki, kj = owner.get(i, len(cycles) + i), owner.get(j, len(cycles) + j)
        # only edges from a lower-indexed group to a higher one, so no new cycles appear
        if ki < kj and (i, j) not in debts:
            debts[(i, j)] = Fraction(rng.randint(1, 3))
    assets = [sum((d for (_, c), d in debts.items() if c == i), ZERO) for i in range(1, n + 1)]
    owed = [sum((d for (b, _), d in debts.items() if b == i), ZERO) for i in range(1, n + 1)]
    p = []
    for k in range(n):
        low = max(owed[k] - assets[k], ZERO)
        p.append(_frac(rng, low, max(owed[k], low + 1)) if owed[k] > low else low)
    return build_network(p, [(i, j, d) for (i, j), d in sorted(debts.items())])


def random_star(rng: random.Random, n_max: int) -> FinancialNetwork:
    n = rng.randint(3, n_max)
    d_in, d_out = Fraction(rng.randint(1, 4)), Fraction(rng.randint(1, 4))
    spokes = n - 1
    p = [_frac(rng, max(d_in - d_out, ZERO), d_in) for _ in range(spokes)]
    center_low = max(spokes * (d_out - d_in), ZERO)
    p.append(_frac(rng, center_low, spokes * d_out))
    return generate(StarSpec(n, d_in, d_out, tuple(p)))


def random_core_periphery(rng: random.Random, n_max: int) -> FinancialNetwork:
    while True:
        n_c = rng.randint(2, 5)
        n_p = rng.randint(1, 7)
        if n_c * (1 + n_p) <= n_max:
            break
    d_core, d_in, d_out = (Fraction(rng.randint(1, 4)) for _ in range(3))
    core_low = max(n_p * (d_out - d_in), ZERO)
    core_high = (n_c - 1) * d_core + n_p * d_out
    p_core = tuple(_frac(rng, core_low, core_high) for _ in range(n_c))
    p_periph = _frac(rng, max(d_in - d_out, ZERO), d_in)
    p_p = (p_periph,) * (n_c * n_p)
    return generate(CorePeripherySpec(n_c, n_p, d_core, d_in, d_out, p_core, p_p))


STRUCTURED_FAMILIES = {
    "disjoint_cycles": random_disjoint_cycles,
    "star": random_star,
    "core_periphery": random_core_periphery,
}


def structured_instances(family: str, count: int = 100, n_max: int = 8, seed: int = 0) -> list:
    rng = random.Random(f"{family}-{n_max}-{seed}")
    make = STRUCTURED_FAMILIES[family]
    return [make(rng, n_max) for _ in range(count)]


# ---------------------------------------------------------------------------
# partition instances


def has_equal_partition(ms) -> bool:
    total = sum(ms)
    if total % 2:
        return False
    reach = {0}
    for x in ms:
        reach |= {r + x for r in reach}
    return total // 2 in reach


def partition_multisets(count: int = 20, seed: int = 5) -> list:
    """Half with an equal partition, half without. Some of the latter have even totals."""
    rng = random.Random(seed)
    yes, no = [], []
    while len(yes) < count // 2 or len(no) < count - count // 2:
        size = rng.randint(2, 12)
        ms = [rng.randint(1, 15) for _ in range(size)]
        if rng.random() < 0.25:
            # one dominant entry: even total, no partition
            ms[-1] = sum(ms[:-1]) + 2 * rng.randint(1, 3)
        ms = tuple(ms)
        bucket = yes if has_equal_partition(ms) else no
        limit = count // 2 if bucket is yes else count - count // 2
        if len(bucket) < limit:
            bucket.append(ms)
    return yes + no


def partition_spec(ms: tuple) -> FromPartition:
    return FromPartition(ms, 2 * sum(ms) + 1)


# ---------------------------------------------------------------------------
# checked-in documents

CHAIN_SIZES = tuple(range(3, 11))


def acceptance_bundles() -> dict:
    """File name (without extension) -> list of (label, network) for every acceptance instance."""
    bundles = {
        "linked_pairs": [("linked_pairs", linked_pairs())],
        "three_equilibria": [("three_equilibria", three_equilibria())],
        "ladder": [("ladder", ladder())],
        "star_golden": [("star_golden", star_golden())],
        "two_way_chains": [(f"chain-n{n}", two_way_chain(n)) for n in CHAIN_SIZES],
        "wheels": [
            (f"wheel-n{n}-a{a}-p{p}", wheel(n, a, p))
            for n in WHEEL_SIZES
            for a in WHEEL_RATES
            for p in wheel_grid(a)
        ],
        "prop2": [(f"prop2-{k}", net) for k, net in enumerate(prop2_instances())],
        "oracle": [(f"oracle-{k}", net) for k, net in enumerate(oracle_instances())],
        "compression": [(f"compression-{k}", net) for k, net in enumerate(compression_instances())],
        "partition": [(f"partition-{','.join(map(str, ms))}", generate(partition_spec(ms))) for ms in partition_multisets()],
    }
    for family in STRUCTURED_FAMILIES:
        for n_max in (8, 40):
            bundles[f"{family}_n{n_max}"] = [
                (f"{family}-n{n_max}-{k}", net) for k, net in enumerate(structured_instances(family, 100, n_max))
            ]
    return bundles
