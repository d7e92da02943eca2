"""Clearing equilibria: payment fixed points, best/worst equilibria, enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import SingularSystemError, solve
from .network import ZERO, FinancialNetwork, as_amount


class PaymentSystemError(ArithmeticError):
    """The payment equations for a default set have no unique solution."""


class EnumerationCapError(ValueError):
    pass


@dataclass(frozen=True)
class Equilibrium:
    values: tuple  # book value V_i by bank id (index i - 1)
    defaults: frozenset
    payments: dict  # (debtor, creditor) -> amount actually paid
    costs: tuple  # bankruptcy cost b_i incurred

    def received(self, net: FinancialNetwork, i: int) -> Fraction:
        return sum((self.payments[(j, i)] for j in net.claims[i]), ZERO)

    @property
    def default_mask(self) -> int:
        return sum(1 << (i - 1) for i in self.defaults)


@dataclass(frozen=True)
class EquilibriumSet:
    equilibria: tuple  # best first, worst last

    @property
    def best(self) -> Equilibrium:
        return self.equilibria[0]

    @property
    def worst(self) -> Equilibrium:
        return self.equilibria[-1]

    def __len__(self):
        return len(self.equilibria)

    def __iter__(self):
        return iter(self.equilibria)


def _outflows(net: FinancialNetwork, F: frozenset) -> dict:
    """Total amount paid out by every bank when exactly the banks in F default.

    Defaulters pay ``(1 - a)(p + d_A) - b`` clipped to ``[0, D^L]``; the others pay
    ``D^L``. The piecewise-linear system is solved by iterating over regimes
    (zero / proportional / full) starting from all-zero payments, solving each
    regime's linear system exactly.
    """
    a, b = net.costs.rates
    L = net.liabilities
    out = {j: L[j] for j in net.banks if j not in F}
    order = sorted(F)
    if not order:
        return out
    idx = {j: k for k, j in enumerate(order)}
    m = len(order)
    base, coef, cap = [], [], []
    for j in order:
        paid_in = sum((d for k, d in net.claims[j].items() if k not in F), ZERO)
        base.append((1 - a) * (net.p_of(j) + paid_in) - b)
        row = [ZERO] * m
        for k, d in net.claims[j].items():
            if k in F and L[k] > 0:
                row[idx[k]] += (1 - a) * d / L[k]
        coef.append(row)
        cap.append(L[j])

    P = [ZERO] * m
    used = None
    for _ in range(4 * m + 8):
        y = [base[r] + sum((coef[r][c] * P[c] for c in range(m) if coef[r][c]), ZERO) for r in range(m)]
        regimes = tuple(0 if y[r] <= 0 else 2 if y[r] >= cap[r] else 1 for r in range(m))
        if regimes == used:
            break
        used = regimes
        lin = [r for r in range(m) if regimes[r] == 1]
        P = [cap[r] if regimes[r] == 2 else ZERO for r in range(m)]
        if lin:
            mat = [[(1 if r == c else 0) - coef[r][c] for c in lin] for r in lin]
            rhs = [base[r] + sum((coef[r][c] * cap[c] for c in range(m) if regimes[c] == 2), ZERO) for r in lin]
            try:
                sol = solve(mat, rhs)
            except SingularSystemError as exc:
                raise PaymentSystemError(f"singular payment system for default set {order}") from exc
            for r, v in zip(lin, sol):
                P[r] = v
    else:
        raise PaymentSystemError(f"regime iteration did not settle for default set {order}")
    for j, v in zip(order, P):
        out[j] = v
    return out


def _edge_payments(net: FinancialNetwork, out: dict) -> dict:
    L = net.liabilities
    return {(j, i): d * out[j] / L[j] for (j, i), d in net.debts.items()}


def _received(net: FinancialNetwork, out: dict) -> list:
    L = net.liabilities
    recv = [ZERO] * (net.n + 1)
    for (j, i), d in net.debts.items():
        if out[j]:
            recv[i] += d * out[j] / L[j]
    return recv


def _build(net: FinancialNetwork, F: frozenset, out: dict) -> tuple[Equilibrium, frozenset]:
    a, b = net.costs.rates
    recv = _received(net, out)
    values, costs, induced = [], [], set()
    for i in net.banks:
        gross = net.p_of(i) + recv[i]
        if gross < net.liabilities[i]:
            induced.add(i)
        beta = b + a * gross if i in F else ZERO
        costs.append(beta)
        values.append(gross - net.liabilities[i] - beta)
    eq = Equilibrium(tuple(values), frozenset(F), _edge_payments(net, out), tuple(costs))
    return eq, frozenset(induced)


def payments_given_defaults(net: FinancialNetwork, defaults: Iterable[int]) -> tuple[dict, bool]:
    """Payments when exactly ``defaults`` default, and whether that pattern is self-consistent."""
    F = frozenset(defaults)
    out = _outflows(net, F)
    _, induced = _build(net, F, out)
    return _edge_payments(net, out), induced == F


def _iterate(net: FinancialNetwork, F: frozenset) -> Equilibrium:
    seen = set()
    while True:
        eq, induced = _build(net, F, _outflows(net, F))
        if induced == F:
            return eq
        if induced in seen:  # cannot happen for monotone iterations; guard anyway
            raise PaymentSystemError("default-set iteration cycled")
        seen.add(F)
        F = induced


def best_equilibrium(net: FinancialNetwork) -> Equilibrium:
    """Greatest equilibrium: start with everyone paying in full and let defaults grow."""
    return _iterate(net, frozenset())


def worst_equilibrium(net: FinancialNetwork) -> Equilibrium:
    """Least equilibrium: start from the all-default regime and let solvency grow."""
    return _iterate(net, frozenset(net.banks))


def value_update(net: FinancialNetwork, values: Sequence) -> tuple:
    """One application of the equilibrium map V -> p + d_A(V) - D^L - b(V)."""
    a, b = net.costs.rates
    L = net.liabilities
    V = [as_amount(v, "value") for v in values]
    out = {j: min(L[j], max(V[j - 1] + L[j], ZERO)) for j in net.banks}
    recv = _received(net, out)
    res = []
    for i in net.banks:
        gross = net.p_of(i) + recv[i]
        beta = b + a * gross if gross < L[i] else ZERO
        res.append(gross - L[i] - beta)
    return tuple(res)


def verify_equilibrium(net: FinancialNetwork, values: Sequence) -> bool:
    if len(values) != net.n:
        return False
    try:
        V = tuple(as_amount(v, "value") for v in values)
    except (TypeError, ValueError):
        return False
    return value_update(net, V) == V


def enumerate_equilibria(net: FinancialNetwork, cap: int = 20) -> EquilibriumSet:
    """All equilibria, found by testing every default set between the best and worst ones."""
    if net.n > cap:
        raise EnumerationCapError(f"{net.n} banks exceeds the enumeration cap {cap}")
    best, worst = best_equilibrium(net), worst_equilibrium(net)
    free = sorted(worst.defaults - best.defaults)
    found = {}
    for mask in range(1 << len(free)):
        F = best.defaults | {free[k] for k in range(len(free)) if mask >> k & 1}
        try:
            eq, induced = _build(net, F, _outflows(net, F))
        except PaymentSystemError:
            continue
        if induced == F and eq.values not in found:
            found[eq.values] = eq
    eqs = sorted(found.values(), key=lambda e: (len(e.defaults), e.default_mask))
    return EquilibriumSet(tuple(eqs))
