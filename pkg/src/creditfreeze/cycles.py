"""Simple-cycle enumeration, cycle detection and tier ordering of disjoint cycles."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import networkx as nx

from .network import FinancialNetwork

DEFAULT_CYCLE_CAP = 10_000


class CycleCapError(RuntimeError):
    def __init__(self, cap: int):
        self.lower_bound = cap + 1
        super().__init__(f"more than {cap} simple cycles (at least {cap + 1} found)")


def debt_graph(net: FinancialNetwork) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(net.banks)
    g.add_edges_from(net.debts)
    return g


def _canonical(cycle) -> tuple:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


@dataclass(frozen=True)
class CycleSet:
    cycles: tuple  # each a tuple of banks b0 -> b1 -> ... -> b0 (debtor to creditor)

    @property
    def K(self) -> int:
        return len(self.cycles)

    def edges(self, k: int) -> tuple:
        c = self.cycles[k]
        return tuple((c[t], c[(t + 1) % len(c)]) for t in range(len(c)))

    @property
    def membership(self) -> dict:
        index: dict[int, list] = {}
        for k, c in enumerate(self.cycles):
            for b in c:
                index.setdefault(b, []).append(k)
        return {b: tuple(ks) for b, ks in index.items()}

    @property
    def multi_cycle_banks(self) -> frozenset:
        return frozenset(b for b, ks in self.membership.items() if len(ks) >= 2)

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)


def simple_cycles(net: FinancialNetwork, cap: int = DEFAULT_CYCLE_CAP) -> CycleSet:
    found = []
    for cyc in nx.simple_cycles(debt_graph(net)):
        found.append(_canonical(cyc))
        if len(found) > cap:
            raise CycleCapError(cap)
    return CycleSet(tuple(sorted(found)))


def has_dependency_cycle(net: FinancialNetwork) -> bool:
    return any(len(c) > 1 for c in nx.strongly_connected_components(debt_graph(net)))


@dataclass(frozen=True)
class TierOrdering:
    order: tuple  # cycle indices, upstream cycles first
    tiers: tuple  # tuple of tuples of cycle indices, by depth


def cycle_tiers(net: FinancialNetwork, cycles: CycleSet) -> TierOrdering:
    """Order disjoint cycles so that no debt path runs from a later cycle to an earlier one."""
    owner = {}
    for k, c in enumerate(cycles.cycles):
        for b in c:
            if b in owner:
                raise ValueError(f"cycles {owner[b]} and {k} share bank {b}")
            owner[b] = k
    g = debt_graph(net)
    K = cycles.K
    downstream = [set() for _ in range(K)]
    for k, c in enumerate(cycles.cycles):
        reach = set().union(*(nx.descendants(g, b) for b in c))
        downstream[k] = {owner[b] for b in reach if b in owner} - {k}
    indeg = [0] * K
    for k in range(K):
        for m in downstream[k]:
            indeg[m] += 1
    depth = [0] * K
    heap = [(min(cycles.cycles[k]), k) for k in range(K) if indeg[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, k = heapq.heappop(heap)
        order.append(k)
        for m in sorted(downstream[k]):
            depth[m] = max(depth[m], depth[k] + 1)
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(heap, (min(cycles.cycles[m]), m))
    if len(order) < K:
        raise ValueError("cycles are mutually reachable; no tier ordering exists")
    tiers = tuple(tuple(k for k in order if depth[k] == d) for d in range(max(depth, default=-1) + 1))
    return TierOrdering(tuple(order), tiers)
