"""Minimum-cost bailouts.

A bailout policy is an ordered list of banks. Each bank receives exactly the
capital it still lacks once every bank made solvent by the earlier steps (directly
or by cascading repayments) pays in full. Because that cost depends only on the
current solvent set, the exact solver searches over solvent sets: a best-first
search ordered by (cost, length, bank sequence), with admissible lower bounds and
two dominance rules that only drop provably redundant moves.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cycles import DEFAULT_CYCLE_CAP, CycleSet, simple_cycles
from .network import ZERO, FinancialNetwork, as_amount, is_weakly_balanced
from .solvency import CascadeEngine, cascade_closure

STRATEGIES = ("greedy_cost", "greedy_flow", "greedy_shortfall")
METHODS = ("exact",) + STRATEGIES


class SearchBudgetError(RuntimeError):
    pass


class GuaranteeError(ValueError):
    """A guaranteed-payment set that does not restore full solvency."""


@dataclass(frozen=True)
class BailoutPolicy:
    steps: tuple  # ((bank, injection), ...)
    optimal: bool | None = None
    method: str = ""

    @property
    def total(self) -> Fraction:
        return sum((c for _, c in self.steps), ZERO)

    @property
    def banks(self) -> tuple:
        return tuple(b for b, _ in self.steps)

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class PolicyCost:
    total: Fraction
    valid: bool
    injections: tuple


@dataclass(frozen=True)
class GuaranteedPayment:
    debtor: int
    creditor: int
    weight: Fraction


@dataclass(frozen=True)
class GuaranteedPaymentSet:
    entries: tuple

    def total(self, net: FinancialNetwork) -> Fraction:
        return sum((e.weight * net.amount(e.debtor, e.creditor) for e in self.entries), ZERO)

    @property
    def edges(self) -> tuple:
        return tuple((e.debtor, e.creditor) for e in self.entries)


@dataclass(frozen=True)
class SolverParams:
    method: str = "exact"
    cycle_cap: int = DEFAULT_CYCLE_CAP
    node_budget: int = 500_000
    budget: Fraction | None = None
    threads: int = 1

    def __post_init__(self):
        method = self.method.replace("-", "_")
        if method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        object.__setattr__(self, "method", method)
        if self.cycle_cap <= 0 or self.node_budget <= 0 or self.threads <= 0:
            raise ValueError("caps, node budget and thread count must be positive")
        if self.budget is not None:
            object.__setattr__(self, "budget", as_amount(self.budget, "budget"))


# ---------------------------------------------------------------------------
# Costs of given policies


def bailout_cost(net: FinancialNetwork, i: int, X: Iterable[int] = ()) -> Fraction:
    """Capital bank i lacks once the cascade closure of X pays in full."""
    S = cascade_closure(net, X).closure
    paid = sum((d for j, d in net.claims[i].items() if j in S), ZERO)
    return max(net.liabilities[i] - net.p_of(i) - paid, ZERO)


def _as_steps(policy) -> list:
    if isinstance(policy, BailoutPolicy):
        return list(policy.steps)
    steps = []
    for s in policy:
        if isinstance(s, (tuple, list)):
            steps.append((int(s[0]), as_amount(s[1])))
        else:
            steps.append((int(s), None))
    return steps


def policy_cost(net: FinancialNetwork, policy) -> PolicyCost:
    """Recompute minimal injections for a policy; valid if they match and everyone ends solvent."""
    eng = CascadeEngine(net)
    mask, inflow = eng.start()
    valid = True
    costs = []
    for bank, stated in _as_steps(policy):
        if not 1 <= bank <= net.n:
            return PolicyCost(sum(costs, ZERO), False, tuple(costs))
        c = eng.cost(mask, inflow, bank - 1)
        costs.append(c)
        if stated is not None and stated != c:
            valid = False
        mask, inflow = eng.add(mask, inflow, [bank - 1])
    return PolicyCost(sum(costs, ZERO), valid and mask == eng.full, tuple(costs))


def _policy_from_sequence(eng: CascadeEngine, seq, **kw) -> BailoutPolicy:
    mask, inflow = eng.start()
    steps = []
    for k in seq:
        steps.append((k + 1, eng.cost(mask, inflow, k)))
        mask, inflow = eng.add(mask, inflow, [k])
    return BailoutPolicy(tuple(steps), **kw)


# ---------------------------------------------------------------------------
# Greedy heuristics


def greedy(net: FinancialNetwork, strategy: str = "greedy_cost") -> BailoutPolicy:
    strategy = strategy.replace("-", "_")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown greedy strategy {strategy!r}")
    eng = CascadeEngine(net)
    return _policy_from_sequence(eng, _greedy_sequence(eng, strategy), method=strategy)


def _greedy_sequence(eng: CascadeEngine, strategy: str) -> tuple:
    mask, inflow = eng.start()
    seq = []
    if strategy == "greedy_shortfall":
        order = sorted(range(eng.n), key=lambda k: (max(eng.L[k] - eng.p[k], ZERO), k))
        for k in order:
            if not mask >> k & 1:
                seq.append(k)
                mask, inflow = eng.add(mask, inflow, [k])
        return tuple(seq)
    while mask != eng.full:
        best_key, best = None, None
        for k in range(eng.n):
            if mask >> k & 1:
                continue
            c = eng.cost(mask, inflow, k)
            if strategy == "greedy_cost":
                key = (c, k)
                state = None
            else:
                state = eng.add(mask, inflow, [k])
                key = (-bin(state[0]).count("1"), c, k)
            if best_key is None or key < best_key:
                best_key, best = key, (k, state)
        k, state = best
        seq.append(k)
        mask, inflow = state if state is not None else eng.add(mask, inflow, [k])
    return tuple(seq)


# ---------------------------------------------------------------------------
# Bounds


def half_shortfall_bound(net: FinancialNetwork) -> Fraction:
    return sum((max(net.liabilities[i] - net.p_of(i), ZERO) for i in net.banks), ZERO) / 2


def cheapest_edge_sum(net: FinancialNetwork, cycles: CycleSet) -> Fraction:
    return sum((min(net.debts[e] for e in cycles.edges(k)) for k in range(cycles.K)), ZERO)


def min_payment_cover(net: FinancialNetwork, cycles: CycleSet | None = None, cap: int = DEFAULT_CYCLE_CAP) -> GuaranteedPaymentSet:
    """Cheapest set of whole debts containing an edge of every simple cycle.

    Branch and bound: branch on the edges of an unhit cycle (edges tried earlier
    are excluded from later branches), bound by a greedy packing of edge-disjoint
    unhit cycles. Equal totals resolve to the smallest sorted edge list.
    """
    if cycles is None:
        cycles = simple_cycles(net, cap)
    sets = [frozenset(cycles.edges(k)) for k in range(cycles.K)]
    w = net.debts
    best: list = [None]

    def bound(unhit, banned):
        used, total = set(), ZERO
        for k in unhit:
            allowed = sets[k] - banned
            if not allowed:
                return None
            if used.isdisjoint(allowed):
                used |= allowed
                total += min(w[e] for e in allowed)
        return total

    def rec(chosen, total, unhit, banned):
        if not unhit:
            label = (total, tuple(sorted(chosen)))
            if best[0] is None or label < best[0]:
                best[0] = label
            return
        k = min(unhit, key=lambda c: (len(sets[c] - banned), c))
        options = sorted(sets[k] - banned, key=lambda e: (w[e], e))
        for t, e in enumerate(options):
            new_total = total + w[e]
            rest = [c for c in unhit if e not in sets[c]]
            lb = bound(rest, banned | set(options[:t]))
            if lb is None or (best[0] is not None and new_total + lb > best[0][0]):
                continue
            rec(chosen + [e], new_total, rest, banned | set(options[:t]))

    rec([], ZERO, list(range(cycles.K)), frozenset())
    edges = best[0][1] if best[0] else ()
    return GuaranteedPaymentSet(tuple(GuaranteedPayment(d, c, Fraction(1)) for d, c in edges))


# ---------------------------------------------------------------------------
# Exact search


def _components(eng: CascadeEngine, R: int) -> list:
    """Strongly connected components of the debt graph restricted to mask R."""
    index, low, onstack, stack, comps = {}, {}, set(), [], []
    counter = 0
    for root in range(eng.n):
        if not R >> root & 1 or root in index:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack.add(v)
            succ = eng.out[v]
            recurse = False
            while pos < len(succ):
                u = succ[pos][0]
                pos += 1
                if not R >> u & 1:
                    continue
                if u not in index:
                    work.append((v, pos))
                    work.append((u, 0))
                    recurse = True
                    break
                if u in onstack:
                    low[v] = min(low[v], index[u])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    onstack.discard(u)
                    comp.append(u)
                    if u == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def _lower_bound(eng: CascadeEngine, comps) -> Fraction:
    """Every component of insolvent banks needs its first member cleared from outside it,
    and every bank short of funds even when all its debtors pay must be bailed."""
    total = eng.zero
    for comp in comps:
        members = set(comp)
        deficits = sum((eng.deficit[k] for k in comp), eng.zero)
        best = None
        for f in comp:
            inside = sum((d for j, d in eng.inn[f] if j in members), eng.zero)
            first = max(eng.L[f] - eng.p[f] - (eng.assets[f] - inside), eng.zero)
            v = first + deficits - eng.deficit[f]
            if best is None or v < best:
                best = v
        total += best
    return total


def twin_classes(net: FinancialNetwork) -> list:
    """Groups of interchangeable banks: identical debts to and from every third bank,
    symmetric mutual debts, equal outside liabilities. Members sorted by p descending."""

    def twins(i, j):
        if net.ext_liability[i - 1] != net.ext_liability[j - 1]:
            return False
        if net.amount(i, j) != net.amount(j, i):
            return False
        ci = {k: v for k, v in net.claims[i].items() if k != j}
        cj = {k: v for k, v in net.claims[j].items() if k != i}
        oi = {k: v for k, v in net.obligations[i].items() if k != j}
        oj = {k: v for k, v in net.obligations[j].items() if k != i}
        return ci == cj and oi == oj

    classes: list = []
    for i in net.banks:
        for cls in classes:
            if all(twins(i, j) for j in cls):
                cls.append(i)
                break
        else:
            classes.append([i])
    return [sorted(c, key=lambda b: (-net.p_of(b), b)) for c in classes if len(c) > 1]


def _search(net: FinancialNetwork, node_budget: int, decision_budget: Fraction | None = None):
    """Returns (sequence or None, optimal flag). In decision mode the first
    sequence found within the budget is returned. Costs inside the search are
    integers in units of 1/scale."""
    eng = CascadeEngine(net, integral=True)
    mask0, inflow0 = eng.start()
    if mask0 == eng.full:
        return (), True
    incumbent = min(
        (int(policy_cost(net, [k + 1 for k in s]).total * eng.scale), len(s), s)
        for s in (_greedy_sequence(eng, g) for g in STRATEGIES)
    )
    if decision_budget is not None:
        if incumbent[0] <= decision_budget * eng.scale:
            return incumbent[2], True
        limit = decision_budget * eng.scale
    else:
        limit = incumbent[0]

    rank = {}
    if is_weakly_balanced(net):
        for cls in twin_classes(net):
            members = [b - 1 for b in cls]
            for k in members:
                rank[k] = (id(cls), members)

    heap = [(0, 0, (), mask0, inflow0)]
    labels = {mask0: (0, 0, ())}
    expansions = 0
    while heap:
        g, ln, seq, mask, inflow = heapq.heappop(heap)
        if labels.get(mask) != (g, ln, seq):
            continue
        if mask == eng.full:
            return seq, True
        expansions += 1
        if expansions > node_budget:
            if decision_budget is not None:
                raise SearchBudgetError(f"node budget {node_budget} exhausted")
            return incumbent[2], False
        R = eng.full & ~mask
        comps = _components(eng, R)
        on_cycle = set()
        for comp in comps:
            if len(comp) > 1:
                on_cycle.update(comp)
        cands = []
        taken = set()
        for k in range(eng.n):
            if not R >> k & 1 or not (k in on_cycle or eng.deficit[k] > 0):
                continue
            if k in rank:
                key, members = rank[k]
                if key in taken:
                    continue
                # only the highest-p insolvent member of a twin class may move
                first = next(m for m in members if R >> m & 1)
                taken.add(key)
                k = first
            cands.append(k)
        for k in cands:
            g2 = g + eng.cost(mask, inflow, k)
            if g2 > limit:
                continue
            nmask, ninflow = eng.add(mask, inflow, [k])
            if nmask != eng.full:
                h = _lower_bound(eng, _components(eng, eng.full & ~nmask))
                if g2 + h > limit:
                    continue
            label = (g2, ln + 1, seq + (k,))
            old = labels.get(nmask)
            if old is not None and old <= label:
                continue
            if decision_budget is not None and nmask == eng.full:
                return label[2], True
            labels[nmask] = label
            heapq.heappush(heap, (g2, ln + 1, seq + (k,), nmask, ninflow))
    if decision_budget is not None:
        return None, True
    return incumbent[2], True  # unreachable for limit = incumbent cost; kept for safety


def opt_exact(net: FinancialNetwork, params: SolverParams | None = None) -> BailoutPolicy:
    """Minimum-total-cost policy; ties go to the shortest, then lexicographically smallest."""
    params = params or SolverParams()
    seq, optimal = _search(net, params.node_budget)
    return _policy_from_sequence(CascadeEngine(net), seq, optimal=optimal, method="exact")


def opt_decision(net: FinancialNetwork, budget, params: SolverParams | None = None) -> bool:
    """Whether some policy restores full solvency at total cost at most ``budget``."""
    budget = as_amount(budget, "budget")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    params = params or SolverParams()
    seq, _ = _search(net, params.node_budget, decision_budget=budget)
    return seq is not None


def solve_bailout(net: FinancialNetwork, params: SolverParams | None = None) -> BailoutPolicy:
    params = params or SolverParams()
    if params.method == "exact":
        return opt_exact(net, params)
    return greedy(net, params.method)


# ---------------------------------------------------------------------------
# Bailouts and guaranteed payments


def policy_to_payments(net: FinancialNetwork, policy) -> GuaranteedPaymentSet:
    """Replace each injection by guarantees on the recipient's still-unpaid claims,
    filling the largest claims first."""
    if not is_weakly_balanced(net):
        raise ValueError("guaranteed-payment conversion needs a weakly balanced network")
    check = policy_cost(net, policy)
    if not check.valid:
        raise ValueError("policy is not valid for this network")
    eng = CascadeEngine(net)
    mask, inflow = eng.start()
    entries = []
    for (bank, _), c in zip(_as_steps(policy), check.injections):
        k = bank - 1
        unpaid = sorted(((d, j) for j, d in eng.inn[k] if not mask >> j & 1), key=lambda t: (-t[0], t[1]))
        need = c
        for d, j in unpaid:
            if need <= 0:
                break
            wgt = min(Fraction(1), need / d)
            entries.append(GuaranteedPayment(j + 1, bank, wgt))
            need -= wgt * d
        assert need <= 0, "weak balance guarantees enough unpaid claims"
        mask, inflow = eng.add(mask, inflow, [k])
    return GuaranteedPaymentSet(tuple(entries))


def payments_to_policy(net: FinancialNetwork, gps: GuaranteedPaymentSet) -> BailoutPolicy:
    """Turn guarantees into a policy: repeatedly bail the lowest-id bank that its guaranteed
    receipts plus payments from already-solvent banks would make solvent."""
    eng = CascadeEngine(net)
    guaranteed = [[] for _ in range(eng.n)]
    for e in gps.entries:
        guaranteed[e.creditor - 1].append((e.debtor - 1, e.weight * net.amount(e.debtor, e.creditor)))
    mask, inflow = eng.start()
    steps = []
    while mask != eng.full:
        pick = None
        for k in range(eng.n):
            if mask >> k & 1:
                continue
            extra = sum((v for j, v in guaranteed[k] if not mask >> j & 1), ZERO)
            if eng.p[k] + inflow[k] + extra >= eng.L[k]:
                pick = k
                break
        if pick is None:
            raise GuaranteeError("guaranteed payments leave some banks insolvent")
        steps.append((pick + 1, eng.cost(mask, inflow, pick)))
        mask, inflow = eng.add(mask, inflow, [pick])
    return BailoutPolicy(tuple(steps), method="from_guarantees")


def guarantees_restore_solvency(net: FinancialNetwork, gps: GuaranteedPaymentSet) -> bool:
    try:
        payments_to_policy(net, gps)
    except GuaranteeError:
        return False
    return True


def bailout_receipts(net: FinancialNetwork, policy) -> dict:
    """Injection and final debt receipts of each bailed bank in the post-bailout best equilibrium."""
    from .clearing import best_equilibrium

    check = policy_cost(net, policy)
    extra = [ZERO] * net.n
    for (bank, _), c in zip(_as_steps(policy), check.injections):
        extra[bank - 1] += c
    after = net.with_p(v + t for v, t in zip(net.p, extra))
    eq = best_equilibrium(after)
    return {b: (extra[b - 1], eq.received(after, b)) for b, _ in _as_steps(policy)}
