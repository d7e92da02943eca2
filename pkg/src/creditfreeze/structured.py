"""Closed-form bailout policies for disjoint cycles, stars and core-periphery networks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bailout import BailoutPolicy, SolverParams, opt_exact, solve_bailout
from .cycles import CycleCapError, CycleSet, cycle_tiers, simple_cycles
from .network import ZERO, FinancialNetwork, is_weakly_balanced
from .solvency import CascadeEngine


class StructureMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DisjointCycles:
    cycles: CycleSet


@dataclass(frozen=True)
class Star:
    center: int
    d_in: Fraction  # each peripheral owes the center
    d_out: Fraction  # the center owes each peripheral


@dataclass(frozen=True)
class Clique:
    core: frozenset
    d_core: Fraction


@dataclass(frozen=True)
class CorePeriphery:
    core: frozenset
    d_core: Fraction
    d_in: Fraction
    d_out: Fraction
    n_p: int
    peripheries: tuple  # (core bank, (peripheral banks...)) pairs


@dataclass(frozen=True)
class General:
    pass


StructureTag = DisjointCycles | Star | Clique | CorePeriphery | General


def _no_outside_and_none_self_sufficient(net: FinancialNetwork) -> bool:
    return all(v == 0 for v in net.ext_liability) and all(net.p_of(i) < net.liabilities[i] for i in net.banks)


def _star(net: FinancialNetwork):
    if net.n < 3:
        return None
    for c in net.banks:
        others = [i for i in net.banks if i != c]
        if len(net.debts) != 2 * len(others):
            return None
        d_in, d_out = net.amount(others[0], c), net.amount(c, others[0])
        if d_in and d_out and all(net.amount(i, c) == d_in and net.amount(c, i) == d_out for i in others):
            return Star(c, d_in, d_out)
    return None


def _clique(net: FinancialNetwork):
    if net.n < 3 or len(net.debts) != net.n * (net.n - 1):
        return None
    values = set(net.debts.values())
    return Clique(frozenset(net.banks), values.pop()) if len(values) == 1 else None


def _core_periphery(net: FinancialNetwork):
    partner = {}
    for i in net.banks:
        nbrs = set(net.claims[i]) | set(net.obligations[i])
        if len(nbrs) == 1:
            partner[i] = nbrs.pop()
    core = sorted(i for i in net.banks if i not in partner)
    if len(core) < 2 or any(partner[i] not in core for i in partner):
        return None
    if any(net.amount(i, j) == 0 for i in core for j in core if i != j):
        return None
    groups = {c: sorted(i for i in partner if partner[i] == c) for c in core}
    sizes = {len(g) for g in groups.values()}
    if len(sizes) != 1 or 0 in sizes:
        return None
    d_core = {net.amount(i, j) for i in core for j in core if i != j}
    d_in = {net.amount(i, partner[i]) for i in partner}
    d_out = {net.amount(partner[i], i) for i in partner}
    if len(d_core) != 1 or len(d_in) != 1 or len(d_out) != 1 or 0 in d_in | d_out:
        return None
    return CorePeriphery(
        frozenset(core), d_core.pop(), d_in.pop(), d_out.pop(), sizes.pop(),
        tuple((c, tuple(groups[c])) for c in core),
    )


def detect_structure(net: FinancialNetwork) -> StructureTag:
    """Most specific tag whose parameters reproduce the network exactly.

    Star, clique and core-periphery tags also require no outside liabilities and
    no bank able to pay its debts from its own portfolio alone.
    """
    try:
        cycles = simple_cycles(net, cap=4 * net.n + 4)
    except CycleCapError:
        cycles = None
    if cycles is not None and all(len(ks) == 1 for ks in cycles.membership.values()):
        return DisjointCycles(cycles)
    if _no_outside_and_none_self_sufficient(net):
        for probe in (_star, _clique, _core_periphery):
            tag = probe(net)
            if tag is not None:
                return tag
    return General()


def _step(eng, state, k, steps):
    mask, inflow = state
    steps.append((k + 1, eng.cost(mask, inflow, k)))
    return eng.add(mask, inflow, [k])


def disjoint_cycles_policy(net: FinancialNetwork) -> BailoutPolicy:
    """Clear cycles upstream first, each through its cheapest member given what is already solvent."""
    tag = detect_structure(net)
    if not isinstance(tag, DisjointCycles):
        raise StructureMismatch(f"expected disjoint cycles, found {type(tag).__name__}")
    cycles = tag.cycles
    eng = CascadeEngine(net)
    state = eng.start()
    steps = []
    for k in cycle_tiers(net, cycles).order:
        members = [b - 1 for b in cycles.cycles[k]]
        pending = [m for m in members if not state[0] >> m & 1]
        if not pending:
            continue
        pick = min(pending, key=lambda m: (eng.cost(*state, m), m))
        state = _step(eng, state, pick, steps)
    return BailoutPolicy(tuple(steps), method="disjoint_cycles")


def _restore_hub(eng, state, hub, spokes, d_in, steps):
    """Make ``hub`` solvent by bailing its insolvent spokes in decreasing p order and/or
    topping up the hub directly, whichever is cheaper at the margin."""
    spokes = sorted((s for s in spokes if not state[0] >> s & 1), key=lambda s: (-eng.p[s], s))
    need = eng.cost(*state, hub)
    if need == 0:
        return state
    whole = math.floor(need / d_in) if d_in else 0
    if whole >= len(spokes):
        for s in spokes:
            state = _step(eng, state, s, steps)
    else:
        for s in spokes[:whole]:
            state = _step(eng, state, s, steps)
        rest = eng.cost(*state, hub)
        if rest > 0 and rest > eng.cost(*state, spokes[whole]):
            state = _step(eng, state, spokes[whole], steps)
    if eng.cost(*state, hub) > 0:
        state = _step(eng, state, hub, steps)
    return state


def star_policy(net: FinancialNetwork) -> BailoutPolicy:
    tag = detect_structure(net)
    if not isinstance(tag, Star):
        raise StructureMismatch(f"expected a star, found {type(tag).__name__}")
    eng = CascadeEngine(net)
    steps = []
    hub = tag.center - 1
    _restore_hub(eng, eng.start(), hub, [i - 1 for i in net.banks if i != tag.center], tag.d_in, steps)
    return BailoutPolicy(tuple(steps), method="star")


def _hubs(net: FinancialNetwork):
    tag = detect_structure(net)
    if isinstance(tag, Star):
        return {tag.center: tuple(i for i in net.banks if i != tag.center)}, tag.d_in, tag.d_out, ZERO
    if isinstance(tag, Clique):
        return {c: () for c in sorted(tag.core)}, ZERO, ZERO, tag.d_core
    if isinstance(tag, CorePeriphery):
        return dict(tag.peripheries), tag.d_in, tag.d_out, tag.d_core
    raise StructureMismatch(f"expected a core-periphery network, found {type(tag).__name__}")


def core_periphery_policy(net: FinancialNetwork) -> BailoutPolicy:
    """Restore core banks one at a time, richest first, each through its own periphery."""
    spokes, d_in, _, _ = _hubs(net)
    eng = CascadeEngine(net)
    state = eng.start()
    steps = []
    while True:
        pending = [c - 1 for c in spokes if not state[0] >> (c - 1) & 1]
        if not pending:
            break
        hub = min(pending, key=lambda c: (-eng.p[c], c))
        state = _restore_hub(eng, state, hub, [s - 1 for s in spokes[hub + 1]], d_in, steps)
    return BailoutPolicy(tuple(steps), method="core_periphery")


MAX_ORDERED_CORES = 18


def _hub_cost(need: Fraction, spoke_costs: list, d_in: Fraction) -> Fraction:
    """Cheapest way to cover ``need`` with spoke bailouts (each worth d_in) plus a direct top-up."""
    best = max(need, ZERO)
    paid = ZERO
    for m, c in enumerate(spoke_costs, start=1):
        paid += c
        best = min(best, paid + max(need - m * d_in, ZERO))
    return best


def core_periphery_order(net: FinancialNetwork) -> tuple:
    """Order of core banks minimising the summed restore costs.

    Restoring a core once ``k`` others are solvent costs the star formula applied
    to its shortfall less ``k * D_core``. Every policy pays at least that much per
    core at the moment the core turns solvent, so the cheapest ordering is optimal.
    Found by dynamic programming over subsets; ties go to the smaller id sequence.
    """
    spokes, d_in, d_out, d_core = _hubs(net)
    cores = sorted(spokes)
    if len(cores) > MAX_ORDERED_CORES:
        raise ValueError(f"ordering more than {MAX_ORDERED_CORES} core banks is not supported")
    eng = CascadeEngine(net)
    base = []
    for c in cores:
        k = c - 1
        ring = sorted((eng.L[s - 1] - eng.p[s - 1] for s in spokes[c]))
        base.append((eng.L[k] - eng.p[k], [max(x, ZERO) for x in ring]))
    m = len(cores)
    best = {0: (ZERO, ())}
    for mask in range(1 << m):
        if mask not in best:
            continue
        cost, order = best[mask]
        k = bin(mask).count("1")
        for t in range(m):
            if mask >> t & 1:
                continue
            need, ring = base[t]
            label = (cost + _hub_cost(need - k * d_core, ring, d_in), order + (cores[t],))
            nxt = mask | 1 << t
            if nxt not in best or label < best[nxt]:
                best[nxt] = label
    return best[(1 << m) - 1][1]


def core_periphery_optimal_policy(net: FinancialNetwork) -> BailoutPolicy:
    """Same restore step as :func:`core_periphery_policy` but with the cost-minimising core order."""
    spokes, d_in, _, _ = _hubs(net)
    eng = CascadeEngine(net)
    state = eng.start()
    steps = []
    for c in core_periphery_order(net):
        if not state[0] >> (c - 1) & 1:
            state = _restore_hub(eng, state, c - 1, [s - 1 for s in spokes[c]], d_in, steps)
    return BailoutPolicy(tuple(steps), method="core_periphery_ordered")


def auto_policy(net: FinancialNetwork, params: SolverParams | None = None) -> BailoutPolicy:
    """Route weakly balanced structured networks to their closed form, everything else to the exact solver."""
    if is_weakly_balanced(net):
        tag = detect_structure(net)
        if isinstance(tag, DisjointCycles):
            return disjoint_cycles_policy(net)
        if isinstance(tag, Star):
            return star_policy(net)
        if isinstance(tag, (Clique, CorePeriphery)):
            return core_periphery_optimal_policy(net)
    return opt_exact(net, params or SolverParams())
