"""Command-line interface.

Exit codes: 0 success, 1 domain error (invalid network, infeasible request,
solver limits), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import generators as gen
from .bailout import METHODS, SearchBudgetError, SolverParams, policy_cost, solve_bailout
from .clearing import EnumerationCapError, PaymentSystemError, best_equilibrium, enumerate_equilibria, worst_equilibrium
from .cycles import DEFAULT_CYCLE_CAP, CycleCapError, simple_cycles
from .document import DocumentError, emit_network, network_to_data, parse_network
from .dot import export_dot
from .network import NetworkError, as_amount, classify_balance, compress, reduce_modulo_solvent
from .solvency import diagnose
from .structured import StructureMismatch, auto_policy, detect_structure

DOMAIN_ERRORS = (
    NetworkError,
    DocumentError,
    StructureMismatch,
    SearchBudgetError,
    CycleCapError,
    EnumerationCapError,
    PaymentSystemError,
    ValueError,
)


def decimal_text(x: Fraction, places: int = 6) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        q = Decimal(x.numerator) / Decimal(x.denominator)
        return str(q.quantize(Decimal(1).scaleb(-places)).normalize() if q else Decimal(0))


def show(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x} ({decimal_text(x)})"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(args):
    return parse_network(_read(args.file), strict=not args.lenient)


def _ids(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()] if text.strip() else []


def _table(rows, header) -> str:
    cols = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cols) for k in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    return "\n".join(fmt.format(*r).rstrip() for r in cols)


def _eq_data(eq) -> dict:
    return {
        "values": [str(v) for v in eq.values],
        "defaults": sorted(eq.defaults),
        "payments": [{"debtor": d, "creditor": c, "amount": str(a)} for (d, c), a in sorted(eq.payments.items())],
    }


def _eq_text(net, eq, title) -> str:
    rows = [(i, show(eq.values[i - 1]), "default" if i in eq.defaults else "solvent") for i in net.banks]
    out = [f"{title}:", _table(rows, ["bank", "value", "status"])]
    partial = [(d, c, show(a), show(net.amount(d, c))) for (d, c), a in sorted(eq.payments.items()) if a != net.amount(d, c)]
    if partial:
        out.append(_table(partial, ["debtor", "creditor", "paid", "owed"]))
    return "\n".join(out)


def _policy_data(net, policy) -> dict:
    check = policy_cost(net, policy)
    return {
        "method": policy.method,
        "optimal": policy.optimal,
        "steps": [{"bank": b, "injection": str(c)} for b, c in policy.steps],
        "total": str(policy.total),
        "restores_full_solvency": check.valid,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args):
    net = _load(args)
    if args.json:
        return {"valid": True, "banks": net.n, "debts": len(net.debts)}
    return f"valid: {net.n} banks, {len(net.debts)} debts"


def cmd_solve(args):
    net = _load(args)
    if args.equilibrium == "all":
        eqs = list(enumerate_equilibria(net, cap=args.cap))
        if args.json:
            return {"equilibria": [_eq_data(e) for e in eqs]}
        return "\n\n".join(_eq_text(net, e, f"equilibrium {k + 1} of {len(eqs)}") for k, e in enumerate(eqs))
    eq = best_equilibrium(net) if args.equilibrium == "best" else worst_equilibrium(net)
    if args.json:
        return {"equilibrium": args.equilibrium, **_eq_data(eq)}
    return _eq_text(net, eq, f"{args.equilibrium} equilibrium")


def cmd_analyze(args):
    net = _load(args)
    rep = classify_balance(net)
    diag = diagnose(net, cycle_cap=args.cycle_cap)
    tag = detect_structure(net)
    data = {
        "structure": type(tag).__name__,
        "weakly_balanced": rep.all_weak,
        "exactly_balanced": rep.all_exact,
        "unilaterally_solvent": sorted(diag.unilaterally_solvent),
        "max_iss": sorted(diag.max_iss),
        "cycles": [list(c) for c in diag.cycles],
        "uncovered_cycles": [list(diag.cycles.cycles[k]) for k in diag.uncovered_cycles],
        "best_all_solvent": diag.best_all_solvent,
        "worst_all_solvent": diag.worst_all_solvent,
        "critical_on_shared_banks": diag.critical_on_shared_banks,
        "one_solvent_bank_per_cycle": diag.one_solvent_bank_per_cycle,
    }
    if args.json:
        return data
    rows = [
        (
            i,
            show(net.p_of(i)),
            show(net.assets[i]),
            show(net.liabilities[i]),
            "yes" if rep.weakly_balanced[i] else "no",
            "yes" if rep.unilaterally_solvent[i] else "no",
            "yes" if i in diag.max_iss else "no",
        )
        for i in net.banks
    ]
    lines = [
        _table(rows, ["bank", "p", "D^A", "D^L", "weak", "unilateral", "in ISS"]),
        f"structure: {data['structure']}",
        f"simple cycles: {len(diag.cycles)}",
    ]
    lines += [f"  {' -> '.join(map(str, c))}" + ("  (no ISS bank)" if k in diag.uncovered_cycles else "") for k, c in enumerate(diag.cycles)]
    lines.append(f"full solvency under full costs: best={diag.best_all_solvent} worst={diag.worst_all_solvent}")
    return "\n".join(lines)


def cmd_bailout(args):
    net = _load(args)
    params = SolverParams(method="exact" if args.method == "auto" else args.method.replace("-", "_"),
                          cycle_cap=args.cycle_cap, node_budget=args.node_budget, threads=args.threads)
    policy = auto_policy(net, params) if args.method == "auto" else solve_bailout(net, params)
    data = _policy_data(net, policy)
    if args.json:
        return data
    rows = [(k + 1, b, show(c)) for k, (b, c) in enumerate(policy.steps)]
    lines = [f"method: {policy.method}", _table(rows, ["step", "bank", "injection"]), f"total: {show(policy.total)}"]
    if not data["restores_full_solvency"]:
        lines.append("warning: policy does not restore full solvency")
    return "\n".join(lines)


def cmd_reduce(args):
    net = _load(args)
    transfers = [as_amount(t) for t in args.transfers.replace(",", " ").split()] if args.transfers else None
    red = reduce_modulo_solvent(net, _ids(args.solvent), transfers)
    if red.network is None:
        return {"original_ids": [], "network": None} if args.json else "every bank removed"
    if args.json:
        return {"original_ids": list(red.original_ids), "network": network_to_data(red.network)}
    return emit_network(red.network).rstrip("\n")


def cmd_compress(args):
    out = compress(_load(args))
    return network_to_data(out) if args.json else emit_network(out).rstrip("\n")


def _fracs(text):
    return tuple(as_amount(t) for t in text.replace(",", " ").split())


def cmd_generate(args):
    v = args.variant
    if v == "wheel":
        spec = gen.Wheel(args.n, as_amount(args.D), as_amount(args.p))
    elif v == "star":
        spec = gen.StarSpec(args.n, as_amount(args.D_in), as_amount(args.D_out), _fracs(args.p))
    elif v == "core-periphery":
        spec = gen.CorePeripherySpec(args.n_C, args.n_P, as_amount(args.D_core), as_amount(args.D_in),
                                     as_amount(args.D_out), _fracs(args.p_core), _fracs(args.p_P))
    elif v == "cycle-chain":
        spec = gen.CycleChain(args.n, as_amount(args.D_hi), as_amount(args.D_lo))
    elif v == "random":
        spec = gen.RandomSpec(args.n, args.density, (args.amount_min, args.amount_max),
                              (args.p_min, args.p_max), args.seed, args.balance)
    else:
        spec = gen.FromPartition(_fracs(args.multiset), as_amount(args.M))
    net = gen.generate(spec)
    return network_to_data(net) if args.json else emit_network(net).rstrip("\n")


def cmd_export_dot(args):
    net = _load(args)
    eq = None
    if args.equilibrium == "best":
        eq = best_equilibrium(net)
    elif args.equilibrium == "worst":
        eq = worst_equilibrium(net)
    policy = None
    if args.policy:
        policy = auto_policy(net) if args.policy == "auto" else solve_bailout(net, SolverParams(method=args.policy.replace("-", "_")))
    text = export_dot(net, eq, policy)
    return {"dot": text} if args.json else text.rstrip("\n")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="solver threads (results do not depend on it)")

    net_args = argparse.ArgumentParser(add_help=False, parents=[common])
    net_args.add_argument("file", help="network document, or - for stdin")
    net_args.add_argument("--lenient", action="store_true", help="ignore unknown document fields")

    parser = argparse.ArgumentParser(prog="creditfreeze", description="Clearing, cascades and bailouts on interbank debt networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[net_args], help="check a network document").set_defaults(run=cmd_validate)

    p = sub.add_parser("solve", parents=[net_args], help="clearing equilibria")
    p.add_argument("--equilibrium", choices=["best", "worst", "all"], default="best")
    p.add_argument("--cap", type=int, default=20, help="bank limit for enumerating all equilibria")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("analyze", parents=[net_args], help="balance, cycles and solvency diagnosis")
    p.add_argument("--cycle-cap", type=int, default=DEFAULT_CYCLE_CAP)
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("bailout", parents=[net_args], help="bailout policy")
    p.add_argument("--method", choices=[m.replace("_", "-") for m in METHODS] + ["auto"], default="exact")
    p.add_argument("--cycle-cap", type=int, default=DEFAULT_CYCLE_CAP)
    p.add_argument("--node-budget", type=int, default=500_000)
    p.set_defaults(run=cmd_bailout)

    p = sub.add_parser("reduce", parents=[net_args], help="remove a solvent set")
    p.add_argument("--solvent", required=True, help="comma-separated bank ids")
    p.add_argument("--transfers", help="comma-separated transfers, one per bank")
    p.set_defaults(run=cmd_reduce)

    sub.add_parser("compress", parents=[net_args], help="net out debt cycles").set_defaults(run=cmd_compress)

    p = sub.add_parser("export-dot", parents=[net_args], help="Graphviz description")
    p.add_argument("--equilibrium", choices=["none", "best", "worst"], default="none")
    p.add_argument("--policy", choices=[m.replace("_", "-") for m in METHODS] + ["auto"])
    p.set_defaults(run=cmd_export_dot)

    g = sub.add_parser("generate", help="emit a generated network document")
    gsub = g.add_subparsers(dest="variant", required=True)
    q = gsub.add_parser("wheel", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--D", default="1")
    q.add_argument("--p", default="0")
    q = gsub.add_parser("star", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--D-in", dest="D_in", required=True)
    q.add_argument("--D-out", dest="D_out", required=True)
    q.add_argument("--p", required=True, help="holdings, center last")
    q = gsub.add_parser("core-periphery", parents=[common])
    q.add_argument("--n-C", dest="n_C", type=int, required=True)
    q.add_argument("--n-P", dest="n_P", type=int, required=True)
    q.add_argument("--D-core", dest="D_core", required=True)
    q.add_argument("--D-in", dest="D_in", required=True)
    q.add_argument("--D-out", dest="D_out", required=True)
    q.add_argument("--p-core", dest="p_core", required=True)
    q.add_argument("--p-P", dest="p_P", required=True)
    q = gsub.add_parser("cycle-chain", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--D-hi", dest="D_hi", default="2")
    q.add_argument("--D-lo", dest="D_lo", default="1")
    q = gsub.add_parser("random", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--density", type=float, default=0.4)
    q.add_argument("--amount-min", type=int, default=1)
    q.add_argument("--amount-max", type=int, default=4)
    q.add_argument("--p-min", type=int, default=0)
    q.add_argument("--p-max", type=int, default=3)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--balance", choices=["none", "weak", "exact"], default="none")
    q = gsub.add_parser("partition", parents=[common])
    q.add_argument("--multiset", required=True)
    q.add_argument("--M", required=True)
    g.set_defaults(run=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        result = args.run(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, (dict, list)):
        print(json.dumps(result, indent=2))
    else:
        print(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
