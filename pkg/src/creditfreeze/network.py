"""Interbank debt network model.

Banks are numbered 1..n; id 0 is the outside sector and only appears through
each bank's scalar ``ext_liability``. A debt edge ``(debtor, creditor)`` with
amount ``D`` means ``debtor`` owes ``creditor`` the amount ``D``. All amounts are
exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

ZERO = Fraction(0)
ONE = Fraction(1)


class NetworkError(ValueError):
    """Raised when a network description violates the model invariants."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def as_amount(x, what: str = "amount") -> Fraction:
    """Convert ints, Fractions and exact decimal/rational strings. Floats are refused."""
    if isinstance(x, bool):
        raise TypeError(f"{what}: booleans are not amounts")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{what}: cannot parse {x!r} as an exact rational") from exc
    if isinstance(x, float):
        raise TypeError(f"{what}: floats are inexact; pass a string such as '0.25' or '1/4'")
    raise TypeError(f"{what}: unsupported type {type(x).__name__}")


@dataclass(frozen=True)
class CanonicalCosts:
    """Bankruptcy costs ``beta = b + a * (p + d_A)`` charged to a defaulting bank."""

    a: Fraction
    b: Fraction = ZERO

    def __post_init__(self):
        a = as_amount(self.a, "a")
        b = as_amount(self.b, "b")
        if not (ZERO <= a <= ONE):
            raise NetworkError([f"cost parameter a={a} outside [0, 1]"])
        if b < 0:
            raise NetworkError([f"cost parameter b={b} is negative"])
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def rates(self) -> tuple[Fraction, Fraction]:
        return self.a, self.b


@dataclass(frozen=True)
class FullCosts:
    """A defaulting bank loses its whole portfolio and all receipts (a=1, b=0)."""

    @property
    def rates(self) -> tuple[Fraction, Fraction]:
        return ONE, ZERO


CostSpec = Union[CanonicalCosts, FullCosts]


@dataclass(frozen=True)
class FinancialNetwork:
    """Immutable debt network.

    ``p`` and ``ext_liability`` are tuples ordered by bank id (index ``i - 1``).
    ``debts`` maps ``(debtor, creditor)`` to a positive amount.
    """

    p: tuple
    debts: Mapping
    ext_liability: tuple = ()
    costs: CostSpec = field(default_factory=FullCosts)

    def __post_init__(self):
        p = tuple(as_amount(v, "p") for v in self.p)
        n = len(p)
        ext = tuple(as_amount(v, "ext_liability") for v in self.ext_liability) or (ZERO,) * n
        debts = {(int(d), int(c)): as_amount(v) for (d, c), v in dict(self.debts).items()}
        errors = _structural_errors(n, p, ext, debts)
        if errors:
            raise NetworkError(errors)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ext_liability", ext)
        object.__setattr__(self, "debts", dict(sorted(debts.items())))

    # -- sizes and ids -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def banks(self) -> range:
        return range(1, self.n + 1)

    # -- adjacency caches (1-based, index 0 unused) ---------------------
    @cached_property
    def claims(self) -> tuple:
        """``claims[i]`` maps each debtor j of bank i to D_ij."""
        out = [dict() for _ in range(self.n + 1)]
        for (debtor, creditor), amt in self.debts.items():
            out[creditor][debtor] = amt
        return tuple(out)

    @cached_property
    def obligations(self) -> tuple:
        """``obligations[j]`` maps each creditor i of bank j to D_ij."""
        out = [dict() for _ in range(self.n + 1)]
        for (debtor, creditor), amt in self.debts.items():
            out[debtor][creditor] = amt
        return tuple(out)

    @cached_property
    def assets(self) -> tuple:
        """Total claims held, D^A, indexed by bank id (index 0 unused)."""
        return (ZERO,) + tuple(sum(self.claims[i].values(), ZERO) for i in self.banks)

    @cached_property
    def liabilities(self) -> tuple:
        """Total debt owed including outside liabilities, D^L, by bank id."""
        return (ZERO,) + tuple(
            sum(self.obligations[i].values(), ZERO) + self.ext_liability[i - 1] for i in self.banks
        )

    def p_of(self, i: int) -> Fraction:
        return self.p[i - 1]

    def amount(self, debtor: int, creditor: int) -> Fraction:
        return self.debts.get((debtor, creditor), ZERO)

    def with_p(self, p: Iterable) -> "FinancialNetwork":
        return FinancialNetwork(tuple(p), self.debts, self.ext_liability, self.costs)

    def with_costs(self, costs: CostSpec) -> "FinancialNetwork":
        return FinancialNetwork(self.p, self.debts, self.ext_liability, costs)

    def with_debts(self, debts: Mapping) -> "FinancialNetwork":
        return FinancialNetwork(self.p, debts, self.ext_liability, self.costs)


def _structural_errors(n, p, ext, debts) -> list[str]:
    errors = []
    if n == 0:
        errors.append("network has zero banks")
    if len(ext) != n:
        errors.append(f"ext_liability has {len(ext)} entries for {n} banks")
    for i, v in enumerate(p, 1):
        if v < 0:
            errors.append(f"bank {i}: negative amount p={v}")
    for i, v in enumerate(ext, 1):
        if v < 0:
            errors.append(f"bank {i}: negative amount ext_liability={v}")
    for (d, c), amt in debts.items():
        if d == c:
            errors.append(f"debt {d}->{c}: self-edge")
        for b in (d, c):
            if not 1 <= b <= n:
                errors.append(f"debt {d}->{c}: unknown bank id {b}")
        if amt <= 0:
            errors.append(f"debt {d}->{c}: non-positive amount {amt}")
    return errors


def build_network(p, edges=(), ext_liability=None, costs: CostSpec | None = None) -> FinancialNetwork:
    """Convenience constructor from ``(debtor, creditor, amount)`` triples."""
    raw = {
        "banks": [
            {"id": i, "p": v, "ext_liability": (ext_liability[i - 1] if ext_liability else 0)}
            for i, v in enumerate(p, 1)
        ],
        "debts": [{"debtor": d, "creditor": c, "amount": a} for d, c, a in edges],
    }
    return validate_network(raw, costs=costs)


def validate_network(raw: Mapping, costs: CostSpec | None = None, merge_parallel: bool = False) -> FinancialNetwork:
    """Check a raw description and build the network, collecting every error found.

    ``raw`` has ``banks`` (``id``, ``p``, optional ``ext_liability``) and ``debts``
    (``debtor``, ``creditor``, ``amount``). Duplicate ordered pairs are errors unless
    ``merge_parallel`` is set, in which case their amounts are summed.
    """
    errors: list[str] = []
    banks = list(raw.get("banks", []))
    if not banks:
        raise NetworkError(["network has zero banks"])
    p: dict[int, Fraction] = {}
    ext: dict[int, Fraction] = {}
    for k, b in enumerate(banks):
        bid = b.get("id")
        if not isinstance(bid, int) or isinstance(bid, bool):
            errors.append(f"banks[{k}]: id {bid!r} is not an integer")
            continue
        if bid in p:
            errors.append(f"banks[{k}]: duplicate bank id {bid}")
            continue
        for key, store in (("p", p), ("ext_liability", ext)):
            try:
                v = as_amount(b.get(key, 0), f"bank {bid} {key}")
            except (TypeError, ValueError) as exc:
                errors.append(str(exc))
                v = ZERO
            if v < 0:
                errors.append(f"bank {bid}: negative amount {key}={v}")
            store[bid] = v
    n = len(banks)
    if p and set(p) != set(range(1, n + 1)):
        bad = sorted(set(p) - set(range(1, n + 1)))
        errors.append(f"bank ids must be exactly 1..{n}; unknown bank id(s) {bad}")

    debts: dict[tuple[int, int], Fraction] = {}
    for k, e in enumerate(raw.get("debts", [])):
        d, c = e.get("debtor"), e.get("creditor")
        label = f"debts[{k}] {d}->{c}"
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (d, c)):
            errors.append(f"{label}: bank ids must be integers")
            continue
        try:
            amt = as_amount(e.get("amount"), f"{label} amount")
        except (TypeError, ValueError) as exc:
            errors.append(str(exc))
            continue
        if d == c:
            errors.append(f"{label}: self-edge")
            continue
        unknown = [x for x in (d, c) if x not in p]
        if unknown:
            errors.append(f"{label}: unknown bank id {unknown[0]}")
            continue
        if amt < 0:
            errors.append(f"{label}: negative amount {amt}")
            continue
        if amt == 0:
            errors.append(f"{label}: zero amount")
            continue
        if (d, c) in debts and not merge_parallel:
            errors.append(f"{label}: duplicate edge")
            continue
        debts[(d, c)] = debts.get((d, c), ZERO) + amt
    if errors:
        raise NetworkError(errors)
    return FinancialNetwork(
        tuple(p[i] for i in range(1, n + 1)),
        debts,
        tuple(ext[i] for i in range(1, n + 1)),
        costs if costs is not None else FullCosts(),
    )


# ---------------------------------------------------------------------------
# Balance conditions


@dataclass(frozen=True)
class BalanceReport:
    weakly_balanced: dict
    exactly_balanced: dict
    critically_balanced: dict
    unilaterally_solvent: dict
    deficit: dict
    shortfall: dict

    @property
    def all_weak(self) -> bool:
        return all(self.weakly_balanced.values())

    @property
    def all_exact(self) -> bool:
        return all(self.exactly_balanced.values())

    @property
    def all_critical(self) -> bool:
        return all(self.critically_balanced.values())


def classify_balance(net: FinancialNetwork) -> BalanceReport:
    weak, exact, crit, uni, deficit, shortfall = {}, {}, {}, {}, {}, {}
    for i in net.banks:
        p, da, dl = net.p_of(i), net.assets[i], net.liabilities[i]
        weak[i] = p + da >= dl
        exact[i] = p + da == dl
        # losing any single claim must break solvency
        crit[i] = weak[i] and all(p + da - d < dl for d in net.claims[i].values())
        uni[i] = p >= dl
        deficit[i] = max(dl - da - p, ZERO)
        shortfall[i] = max(dl - p, ZERO)
    return BalanceReport(weak, exact, crit, uni, deficit, shortfall)


def is_weakly_balanced(net: FinancialNetwork) -> bool:
    return all(net.p_of(i) + net.assets[i] >= net.liabilities[i] for i in net.banks)


def net_imbalance_injections(net: FinancialNetwork) -> tuple:
    """Smallest per-bank transfers that make every bank weakly balanced."""
    return tuple(max(net.liabilities[i] - net.assets[i] - net.p_of(i), ZERO) for i in net.banks)


def apply_transfers(net: FinancialNetwork, transfers: Sequence) -> FinancialNetwork:
    return net.with_p(v + as_amount(t) for v, t in zip(net.p, transfers))


# ---------------------------------------------------------------------------
# Multilateral netting


def _shortest_cycle(debts: Mapping, n: int):
    """Shortest simple cycle; ties go to the lexicographically smallest rotation."""
    succ = [[] for _ in range(n + 1)]
    for d, c in sorted(debts):
        succ[d].append(c)
    best = None
    for s in range(1, n + 1):
        # cycles whose smallest bank is s: search only through banks > s
        parent = {s: None}
        frontier = [s]
        found = None
        while frontier and found is None:
            nxt = []
            for u in frontier:
                for v in succ[u]:
                    if v == s:
                        path = [u]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        cand = tuple(reversed(path))
                        if found is None or cand < found:
                            found = cand
                    elif v > s and v not in parent:
                        parent[v] = u
                        nxt.append(v)
            frontier = nxt
        if found is not None and (best is None or (len(found), found) < (len(best), best)):
            best = found
    return best


def compress(net: FinancialNetwork) -> FinancialNetwork:
    """Cancel debt cycles one at a time until the debt graph is acyclic."""
    debts = dict(net.debts)
    while True:
        cyc = _shortest_cycle(debts, net.n)
        if cyc is None:
            break
        edges = [(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc))]
        cut = min(debts[e] for e in edges)
        for e in edges:
            debts[e] -= cut
            if debts[e] == 0:
                del debts[e]
    return net.with_debts(debts)


# ---------------------------------------------------------------------------
# Reduction modulo a solvent set


@dataclass(frozen=True)
class Reduction:
    network: FinancialNetwork | None
    original_ids: tuple  # original_ids[k - 1] is the old id of new bank k

    def to_original(self, bank: int) -> int:
        return self.original_ids[bank - 1]


def reduce_modulo_solvent(net: FinancialNetwork, solvent: Iterable[int], transfers: Sequence | None = None) -> Reduction:
    """Remove a self-sufficient solvent set and fold its payments into the rest.

    Each remaining bank's portfolio grows by its transfer and by what the removed
    banks owe it; what it owes the removed banks becomes an outside liability.
    """
    S = set(solvent)
    t = [as_amount(x) for x in transfers] if transfers is not None else [ZERO] * net.n
    unknown = sorted(b for b in S if not 1 <= b <= net.n)
    if unknown:
        raise NetworkError([f"unknown bank id {unknown[0]} in solvent set"])
    bad = [
        i
        for i in sorted(S)
        if net.p_of(i) + t[i - 1] + sum((a for j, a in net.claims[i].items() if j in S), ZERO) < net.liabilities[i]
    ]
    if bad:
        raise NetworkError([f"bank {i} is not solvent given transfers and payments from the solvent set" for i in bad])
    keep = [i for i in net.banks if i not in S]
    if not keep:
        return Reduction(None, ())
    new_id = {old: k for k, old in enumerate(keep, 1)}
    p, ext, debts = [], [], {}
    for i in keep:
        p.append(net.p_of(i) + t[i - 1] + sum((a for j, a in net.claims[i].items() if j in S), ZERO))
        ext.append(net.ext_liability[i - 1] + sum((a for c, a in net.obligations[i].items() if c in S), ZERO))
        for c, a in net.obligations[i].items():
            if c not in S:
                debts[(new_id[i], new_id[c])] = a
    return Reduction(FinancialNetwork(tuple(p), debts, tuple(ext), net.costs), tuple(keep))
