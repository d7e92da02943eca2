"""Solvency cascades, iteratively strongly solvent sets and the cycle-cover diagnosis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .clearing import best_equilibrium, worst_equilibrium
from .cycles import DEFAULT_CYCLE_CAP, CycleSet, simple_cycles
from .network import ZERO, FinancialNetwork, FullCosts, classify_balance


class CascadeEngine:
    """Incremental cascade over bitmask states (bank ``i`` is bit ``i - 1``).

    A state is a pair ``(mask, inflow)`` where ``inflow[k]`` is what bank ``k + 1``
    receives from the banks in ``mask``. Banks join the mask when
    ``p + inflow >= D^L``, or when they are bailed out.

    With ``integral=True`` every amount is multiplied by the common denominator
    ``scale`` and stored as a plain int, which is much faster to add and compare.
    """

    def __init__(self, net: FinancialNetwork, extra_p=None, integral: bool = False):
        n = net.n
        self.n = n
        self.full = (1 << n) - 1
        p = [net.p_of(i) + (extra_p[i - 1] if extra_p else ZERO) for i in net.banks]
        self.scale = 1
        if integral:
            for x in [*p, *net.debts.values(), *net.ext_liability]:
                self.scale = math.lcm(self.scale, x.denominator)
        conv = (lambda x: int(x * self.scale)) if integral else (lambda x: x)
        self.zero = 0 if integral else ZERO
        self.p = [conv(x) for x in p]
        self.L = [conv(net.liabilities[i]) for i in net.banks]
        self.out = [[(c - 1, conv(d)) for c, d in net.obligations[i].items()] for i in net.banks]
        self.inn = [[(j - 1, conv(d)) for j, d in net.claims[i].items()] for i in net.banks]
        self.assets = [conv(net.assets[i]) for i in net.banks]
        self.deficit = [max(self.L[k] - self.p[k] - self.assets[k], self.zero) for k in range(n)]

    def _spread(self, mask, inflow, queue):
        while queue:
            j = queue.pop()
            for i, d in self.out[j]:
                if not mask >> i & 1:
                    inflow[i] += d
                    if self.p[i] + inflow[i] >= self.L[i]:
                        mask |= 1 << i
                        queue.append(i)
        return mask

    def start(self):
        inflow = [self.zero] * self.n
        seeds = [k for k in range(self.n) if self.p[k] >= self.L[k]]
        mask = 0
        for k in seeds:
            mask |= 1 << k
        return self._spread(mask, inflow, seeds), inflow

    def add(self, mask, inflow, banks):
        """Make ``banks`` (0-based) solvent and propagate; returns a new state."""
        inflow = list(inflow)
        queue = []
        for k in banks:
            if not mask >> k & 1:
                mask |= 1 << k
                queue.append(k)
        return self._spread(mask, inflow, queue), inflow

    def cost(self, mask, inflow, k) -> Fraction:
        if mask >> k & 1:
            return self.zero
        return max(self.L[k] - self.p[k] - inflow[k], self.zero)


@dataclass(frozen=True)
class SolvencySetTrace:
    seed: frozenset
    layers: tuple  # successive layers added by the cascade
    closure: frozenset

    def __contains__(self, bank):
        return bank in self.closure


def cascade_closure(net: FinancialNetwork, X: Iterable[int] = ()) -> SolvencySetTrace:
    """Banks made solvent by treating X as solvent and letting repayments propagate."""
    seed = frozenset(X)
    S = set(seed)
    received = {i: sum((d for j, d in net.claims[i].items() if j in S), ZERO) for i in net.banks}
    layers = []
    while True:
        new = {i for i in net.banks if i not in S and net.p_of(i) + received[i] >= net.liabilities[i]}
        if not new:
            break
        layers.append(frozenset(new))
        S |= new
        for j in new:
            for i, d in net.obligations[j].items():
                received[i] += d
    return SolvencySetTrace(seed, tuple(layers), frozenset(S))


def max_iss_set(net: FinancialNetwork) -> SolvencySetTrace:
    """Largest iteratively strongly solvent set: the cascade started from nobody."""
    return cascade_closure(net, ())


@dataclass(frozen=True)
class SolvencyDiagnosis:
    weakly_balanced: bool
    unilaterally_solvent: frozenset
    max_iss: frozenset
    cycles: CycleSet
    uncovered_cycles: tuple
    best_all_solvent: bool
    worst_all_solvent: bool
    critical_on_shared_banks: bool  # every bank on two or more cycles is critically balanced
    one_solvent_bank_per_cycle: bool  # every cycle holds a unilaterally solvent bank


def diagnose(net: FinancialNetwork, cycle_cap: int = DEFAULT_CYCLE_CAP) -> SolvencyDiagnosis:
    """Balance, cascade and cycle-cover facts, with clearing evaluated under full costs."""
    report = classify_balance(net)
    cycles = simple_cycles(net, cycle_cap)
    iss = max_iss_set(net).closure
    uni = frozenset(i for i in net.banks if report.unilaterally_solvent[i])
    full = net.with_costs(FullCosts())
    return SolvencyDiagnosis(
        weakly_balanced=report.all_weak,
        unilaterally_solvent=uni,
        max_iss=iss,
        cycles=cycles,
        uncovered_cycles=tuple(k for k, c in enumerate(cycles) if not iss.intersection(c)),
        best_all_solvent=not best_equilibrium(full).defaults,
        worst_all_solvent=not worst_equilibrium(full).defaults,
        critical_on_shared_banks=all(report.critically_balanced[b] for b in cycles.multi_cycle_banks),
        one_solvent_bank_per_cycle=all(uni.intersection(c) for c in cycles),
    )
