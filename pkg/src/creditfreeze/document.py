"""JSON network documents with exact rational amounts.

Example::

    {
      "format": "creditfreeze-network",
      "version": 1,
      "costs": {"kind": "canonical", "a": "1/2", "b": "0"},
      "banks": [{"id": 1, "p": "1", "ext_liability": "0"}, ...],
      "debts": [{"debtor": 1, "creditor": 2, "amount": "1"}, ...]
    }

Amounts are strings holding an integer, an exact decimal ("0.25") or a ratio
("2/7"); JSON integers are accepted too. JSON floats never reach a Fraction: the
parser keeps their source text. Parallel debts between the same ordered pair are
summed into one edge.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .network import CanonicalCosts, FinancialNetwork, FullCosts, NetworkError, validate_network

FORMAT = "creditfreeze-network"
VERSION = 1

_TOP = {"format", "version", "costs", "banks", "debts"}
_BANK = {"id", "p", "ext_liability"}
_DEBT = {"debtor", "creditor", "amount"}
_COSTS = {"kind", "a", "b"}


class DocumentError(ValueError):
    pass


def fmt_amount(x: Fraction) -> str:
    return str(x)


def _check_fields(obj, allowed, where, strict):
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    extra = sorted(set(obj) - allowed)
    if strict and extra:
        raise DocumentError(f"{where}: unknown field(s) {extra}")


def _amount_text(v, where):
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise DocumentError(f"{where}: amount must be a string or integer")
    return v


def parse_costs(obj, strict=True):
    if obj is None:
        return FullCosts()
    _check_fields(obj, _COSTS, "costs", strict)
    kind = obj.get("kind")
    if kind == "full":
        return FullCosts()
    if kind == "canonical":
        try:
            return CanonicalCosts(Fraction(str(obj.get("a", "0"))), Fraction(str(obj.get("b", "0"))))
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"costs: {exc}") from exc
    raise DocumentError(f"costs.kind: expected 'canonical' or 'full', got {kind!r}")


def network_from_data(data, strict: bool = True) -> FinancialNetwork:
    _check_fields(data, _TOP, "document", strict)
    if data.get("format", FORMAT) != FORMAT:
        raise DocumentError(f"format: expected {FORMAT!r}")
    if data.get("version", VERSION) != VERSION:
        raise DocumentError(f"version: unsupported version {data.get('version')!r}")
    banks = data.get("banks")
    if not isinstance(banks, list):
        raise DocumentError("banks: expected a list")
    debts = data.get("debts", [])
    if not isinstance(debts, list):
        raise DocumentError("debts: expected a list")
    for k, b in enumerate(banks):
        _check_fields(b, _BANK, f"banks[{k}]", strict)
        for key in ("p", "ext_liability"):
            if key in b:
                _amount_text(b[key], f"banks[{k}].{key}")
    for k, e in enumerate(debts):
        _check_fields(e, _DEBT, f"debts[{k}]", strict)
        _amount_text(e.get("amount"), f"debts[{k}].amount")
    return validate_network({"banks": banks, "debts": debts}, costs=parse_costs(data.get("costs"), strict), merge_parallel=True)


def parse_network(text: str, strict: bool = True) -> FinancialNetwork:
    """Parse a document. Raises DocumentError for syntax problems and NetworkError for invalid networks."""
    try:
        data = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return network_from_data(data, strict)


def costs_to_data(costs) -> dict:
    if isinstance(costs, FullCosts):
        return {"kind": "full"}
    return {"kind": "canonical", "a": fmt_amount(costs.a), "b": fmt_amount(costs.b)}


def network_to_data(net: FinancialNetwork) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "costs": costs_to_data(net.costs),
        "banks": [
            {"id": i, "p": fmt_amount(net.p_of(i)), "ext_liability": fmt_amount(net.ext_liability[i - 1])}
            for i in net.banks
        ],
        "debts": [{"debtor": d, "creditor": c, "amount": fmt_amount(a)} for (d, c), a in sorted(net.debts.items())],
    }


def emit_network(net: FinancialNetwork) -> str:
    return json.dumps(network_to_data(net), indent=2) + "\n"


__all__ = [
    "DocumentError",
    "NetworkError",
    "emit_network",
    "parse_network",
    "network_to_data",
    "network_from_data",
]
