"""Exact clearing, solvency cascades and bailout optimisation for interbank debt networks."""

from .bailout import (
    BailoutPolicy,
    GuaranteedPayment,
    GuaranteedPaymentSet,
    PolicyCost,
    SolverParams,
    bailout_cost,
    bailout_receipts,
    cheapest_edge_sum,
    greedy,
    guarantees_restore_solvency,
    half_shortfall_bound,
    min_payment_cover,
    opt_decision,
    opt_exact,
    payments_to_policy,
    policy_cost,
    policy_to_payments,
    solve_bailout,
)
from .clearing import (
    Equilibrium,
    EquilibriumSet,
    best_equilibrium,
    enumerate_equilibria,
    payments_given_defaults,
    value_update,
    verify_equilibrium,
    worst_equilibrium,
)
from .cycles import CycleSet, cycle_tiers, has_dependency_cycle, simple_cycles
from .document import emit_network, parse_network
from .dot import export_dot
from .generators import generate
from .network import (
    CanonicalCosts,
    FinancialNetwork,
    FullCosts,
    NetworkError,
    build_network,
    classify_balance,
    compress,
    is_weakly_balanced,
    net_imbalance_injections,
    reduce_modulo_solvent,
    validate_network,
)
from .solvency import cascade_closure, diagnose, max_iss_set
from .structured import (
    auto_policy,
    core_periphery_optimal_policy,
    core_periphery_policy,
    detect_structure,
    disjoint_cycles_policy,
    star_policy,
)
