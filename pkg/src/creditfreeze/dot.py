"""Graphviz DOT export. Edges run debtor -> creditor and carry the debt amount."""

from __future__ import annotations

from .bailout import BailoutPolicy, _as_steps, policy_cost
from .clearing import Equilibrium
from .network import FinancialNetwork


def export_dot(net: FinancialNetwork | None, equilibrium: Equilibrium | None = None, policy=None) -> str:
    lines = ["digraph debts {", "  rankdir=LR;", "  node [shape=circle];"]
    if net is None or net.n == 0:
        return "\n".join(lines + ["}"]) + "\n"
    injections = {}
    if policy is not None:
        check = policy_cost(net, policy)
        for (bank, _), c in zip(_as_steps(policy), check.injections):
            injections[bank] = injections.get(bank, 0) + c
    defaults = equilibrium.defaults if equilibrium is not None else frozenset()
    for i in net.banks:
        label = f"{i}\\np={net.p_of(i)}"
        attrs = []
        if equilibrium is not None:
            label += f"\\nV={equilibrium.values[i - 1]}"
        if i in injections:
            label += f"\\n+{injections[i]}"
            attrs.append("peripheries=2")
        if i in defaults:
            attrs += ["style=filled", 'fillcolor="#f4a6a6"']
        attrs.insert(0, f'label="{label}"')
        lines.append(f"  {i} [{', '.join(attrs)}];")
    for (d, c), a in sorted(net.debts.items()):
        lines.append(f'  {d} -> {c} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = ["export_dot", "BailoutPolicy"]
