"""Parametric network families and the partition-to-bailout translator."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .network import ZERO, CanonicalCosts, FinancialNetwork, FullCosts, as_amount, build_network


@dataclass(frozen=True)
class Wheel:
    """Ring 1 -> 2 -> ... -> n -> 1, every debt D, every bank holding p."""

    n: int
    D: Fraction = Fraction(1)
    p: Fraction = ZERO


@dataclass(frozen=True)
class StarSpec:
    """Peripherals 1..n-1 each owe the center (bank n) D_in; the center owes each D_out."""

    n: int
    D_in: Fraction
    D_out: Fraction
    p: tuple  # length n, center last


@dataclass(frozen=True)
class CorePeripherySpec:
    """Cores 1..n_C form a clique of debts D_core. Each core then gets n_P peripherals,
    numbered consecutively after the cores, each owing its core D_in and owed D_out."""

    n_C: int
    n_P: int
    D_core: Fraction
    D_in: Fraction
    D_out: Fraction
    p_core: tuple
    p_P: tuple  # one entry per peripheral, in bank order


@dataclass(frozen=True)
class CycleChain:
    """Path of reciprocal debts: i owes i+1 D_hi and i+1 owes i D_lo. Banks 2..n-1 hold D_lo."""

    n: int
    D_hi: Fraction = Fraction(2)
    D_lo: Fraction = Fraction(1)


@dataclass(frozen=True)
class RandomSpec:
    n: int
    density: float = 0.4
    amount_range: tuple = (1, 4)
    p_range: tuple = (0, 3)
    seed: int = 0
    balance: str = "none"  # "none", "weak" or "exact"


@dataclass(frozen=True)
class FromPartition:
    multiset: tuple
    M: Fraction


GeneratorSpec = Wheel | StarSpec | CorePeripherySpec | CycleChain | RandomSpec | FromPartition


def wheel(spec: Wheel, costs=None) -> FinancialNetwork:
    n = spec.n
    edges = [(i, i % n + 1, as_amount(spec.D)) for i in range(1, n + 1)]
    return build_network([as_amount(spec.p)] * n, edges, costs=costs)


def star(spec: StarSpec, costs=None) -> FinancialNetwork:
    n = spec.n
    if len(spec.p) != n:
        raise ValueError(f"star: expected {n} holdings, got {len(spec.p)}")
    edges = []
    for i in range(1, n):
        edges += [(i, n, as_amount(spec.D_in)), (n, i, as_amount(spec.D_out))]
    return build_network(list(spec.p), edges, costs=costs)


def core_periphery(spec: CorePeripherySpec, costs=None) -> FinancialNetwork:
    nc, npp = spec.n_C, spec.n_P
    if len(spec.p_core) != nc or len(spec.p_P) != nc * npp:
        raise ValueError("core_periphery: holdings vectors do not match n_C and n_P")
    edges = [(i, j, as_amount(spec.D_core)) for i in range(1, nc + 1) for j in range(1, nc + 1) if i != j]
    bank = nc
    for c in range(1, nc + 1):
        for _ in range(npp):
            bank += 1
            edges += [(bank, c, as_amount(spec.D_in)), (c, bank, as_amount(spec.D_out))]
    return build_network(list(spec.p_core) + list(spec.p_P), edges, costs=costs)


def cycle_chain(spec: CycleChain, costs=None) -> FinancialNetwork:
    n = spec.n
    if n < 2:
        raise ValueError("cycle_chain: need at least 2 banks")
    hi, lo = as_amount(spec.D_hi), as_amount(spec.D_lo)
    edges = []
    for i in range(1, n):
        edges += [(i, i + 1, hi), (i + 1, i, lo)]
    return build_network([ZERO] + [lo] * (n - 2) + [ZERO], edges, costs=costs)


def random_network(spec: RandomSpec, costs=None) -> FinancialNetwork:
    """Seeded Erdos-Renyi style debts with integer amounts.

    ``balance="weak"`` raises holdings until every bank is weakly balanced;
    ``"exact"`` sets holdings and outside liabilities so that p + D^A = D^L holds
    with equality everywhere.
    """
    rng = random.Random(spec.seed)
    n = spec.n
    lo, hi = spec.amount_range
    debts = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and rng.random() < spec.density:
                debts[(i, j)] = Fraction(rng.randint(lo, hi))
    p = [Fraction(rng.randint(*spec.p_range)) for _ in range(n)]
    ext = [ZERO] * n
    assets = [sum((d for (_, c), d in debts.items() if c == i), ZERO) for i in range(1, n + 1)]
    owed = [sum((d for (b, _), d in debts.items() if b == i), ZERO) for i in range(1, n + 1)]
    if spec.balance == "weak":
        p = [max(p[k], owed[k] - assets[k]) for k in range(n)]
    elif spec.balance == "exact":
        p = [max(owed[k] - assets[k], ZERO) for k in range(n)]
        ext = [max(assets[k] - owed[k], ZERO) for k in range(n)]
    elif spec.balance != "none":
        raise ValueError(f"unknown balance mode {spec.balance!r}")
    return build_network(p, [(i, j, d) for (i, j), d in sorted(debts.items())], ext_liability=ext, costs=costs)


def from_partition(spec: FromPartition, costs=None) -> FinancialNetwork:
    """Bilateral star whose cheapest bailout reveals an equal partition of ``multiset``.

    Peripheral i owes the center a_i and holds a_i - a_i/M. The center (last bank)
    owes each peripheral a_i/2 and holds nothing, so its shortfall is sum(a)/2. An
    equal partition exists iff all banks can be saved for sum(a)/(2M).
    """
    a = [as_amount(x) for x in spec.multiset]
    M = as_amount(spec.M)
    if any(x <= 0 for x in a):
        raise ValueError("from_partition: multiset entries must be positive")
    if M <= 2 * sum(a):
        raise ValueError(f"from_partition: M must exceed 2*sum(a) = {2 * sum(a)}")
    center = len(a) + 1
    edges = []
    for i, ai in enumerate(a, start=1):
        edges += [(i, center, ai), (center, i, ai / 2)]
    return build_network([ai - ai / M for ai in a] + [ZERO], edges, costs=costs)


def partition_budget(spec: FromPartition) -> Fraction:
    return sum(as_amount(x) for x in spec.multiset) / (2 * as_amount(spec.M))


def generate(spec: GeneratorSpec, costs=None) -> FinancialNetwork:
    builders = {
        Wheel: wheel,
        StarSpec: star,
        CorePeripherySpec: core_periphery,
        CycleChain: cycle_chain,
        RandomSpec: random_network,
        FromPartition: from_partition,
    }
    try:
        build = builders[type(spec)]
    except KeyError:
        raise TypeError(f"unknown generator spec {type(spec).__name__}") from None
    return build(spec, costs)
