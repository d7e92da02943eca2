import random
from fractions import Fraction as F

import pytest

from oracles import all_orders_opt, closure, memo_opt, sequence_cost, shortfall, subset_sum_half

from creditfreeze.bailout import (
    BailoutPolicy,
    GuaranteedPayment,
    GuaranteedPaymentSet,
    GuaranteeError,
    SearchBudgetError,
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
    twin_classes,
)
from creditfreeze.corpus import linked_pairs, two_way_chain, oracle_instances, three_equilibria
from creditfreeze.cycles import simple_cycles
from creditfreeze.generators import FromPartition, RandomSpec, StarSpec, Wheel, generate, partition_budget
from creditfreeze.network import FullCosts, build_network, classify_balance

PAIR = build_network([0, 0], [(1, 2, 1), (2, 1, 1)])
TWO_PAIRS = build_network([0] * 4, [(1, 2, 1), (2, 1, 1), (3, 4, 1), (4, 3, 1)])


class TestCosts:
    def test_bailout_cost(self):
        net = three_equilibria()
        assert bailout_cost(net, 2) == F(3, 4)
        assert bailout_cost(net, 2, {3}) == F(1, 2)
        assert bailout_cost(linked_pairs(), 1, {2}) == 0

    def test_policy_cost_chain(self):
        net = two_way_chain(4)
        assert policy_cost(net, [1]) == policy_cost(net, [(1, 2)])
        pc = policy_cost(net, [1])
        assert pc.total == 2 and pc.valid
        pc = policy_cost(net, [4, 3, 2, 1])
        assert pc.total == 4 and pc.valid and pc.injections == (1, 1, 1, 1)

    def test_empty_policy_invalid(self):
        assert not policy_cost(PAIR, []).valid

    def test_wrong_stated_injection_invalid(self):
        assert not policy_cost(two_way_chain(4), [(1, 1)]).valid

    def test_unknown_bank_invalid(self):
        assert not policy_cost(PAIR, [3]).valid


class TestExact:
    def test_three_equilibria(self):
        pol = opt_exact(three_equilibria())
        assert pol.steps == ((2, F(3, 4)),)
        assert pol.optimal

    def test_chain(self):
        assert opt_exact(two_way_chain(4)).steps == ((1, F(2)),)

    def test_already_solvent(self):
        pol = opt_exact(build_network([1, 1], [(1, 2, 1), (2, 1, 1)]))
        assert pol.steps == () and pol.total == 0

    def test_tie_break_prefers_short_then_small_ids(self):
        # both banks of a symmetric pair cost 1; bank 1 wins
        assert opt_exact(PAIR).steps == ((1, F(1)),)

    def test_steps_are_minimal(self):
        for net in oracle_instances(30):
            pol = opt_exact(net)
            pc = policy_cost(net, pol)
            assert pc.valid and pc.injections == tuple(c for _, c in pol.steps)
            assert all(c > 0 for _, c in pol.steps)

    def test_budget_exhaustion_returns_incumbent(self):
        net = oracle_instances(3)[2]
        pol = opt_exact(net, SolverParams(node_budget=1))
        assert pol.optimal is False
        assert policy_cost(net, pol).valid
        assert pol.total == 4 > opt_exact(net).total == 3

    def test_decision_budget_exhaustion_raises(self):
        ms = (5, 12, 6, 13, 12, 14, 12, 11, 15, 9, 2)
        net = generate(FromPartition(ms, 2 * sum(ms) + 1))
        with pytest.raises(SearchBudgetError):
            opt_decision(net, partition_budget(FromPartition(ms, 2 * sum(ms) + 1)), SolverParams(node_budget=1))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            SolverParams(method="nope")
        with pytest.raises(ValueError):
            SolverParams(node_budget=0)
        assert SolverParams(method="greedy-cost").method == "greedy_cost"

    def test_solve_bailout_dispatch(self):
        net = two_way_chain(5)
        assert solve_bailout(net).total == 2
        assert solve_bailout(net, SolverParams(method="greedy_cost")).total == 5


class TestDecision:
    def test_three_equilibria(self):
        assert opt_decision(three_equilibria(), F(3, 4))
        assert not opt_decision(three_equilibria(), F(1, 2))

    def test_partition(self):
        assert opt_decision(generate(FromPartition((3, 1, 2, 2), 20)), F(8, 20))
        assert not opt_decision(generate(FromPartition((3, 1, 1), 20)), F(5, 40))

    def test_negative_budget(self):
        with pytest.raises(ValueError):
            opt_decision(PAIR, -1)

    @pytest.mark.parametrize("ms", [(1, 1), (2, 3), (1, 2, 3), (2, 2, 3, 5), (4, 4, 4, 6), (1, 5, 6, 7, 9)])
    def test_partition_against_subset_sum(self, ms):
        spec = FromPartition(ms, 2 * sum(ms) + 1)
        assert opt_decision(generate(spec), partition_budget(spec)) == subset_sum_half(ms)


class TestGreedy:
    def test_chain_cost(self):
        pol = greedy(two_way_chain(4), "greedy_cost")
        assert pol.banks == (4, 3, 2, 1) and pol.total == 4

    def test_chain_flow(self):
        pol = greedy(two_way_chain(4), "greedy_flow")
        assert pol.banks == (1,) and pol.total == 2

    def test_chain_shortfall(self):
        pol = greedy(two_way_chain(4), "greedy_shortfall")
        assert policy_cost(two_way_chain(4), pol).valid

    def test_disjoint_pairs(self):
        pol = greedy(TWO_PAIRS, "greedy_cost")
        assert pol.total == 2 and len(pol) == 2
        assert {b <= 2 for b in pol.banks} == {True, False}

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            greedy(PAIR, "ratio")

    def test_never_beats_exact(self):
        for net in oracle_instances(40):
            best = opt_exact(net).total
            for s in ("greedy_cost", "greedy_flow", "greedy_shortfall"):
                assert greedy(net, s).total >= best


def ratio_greedy(net):
    """Adversary: bail the bank with the largest closure gain per unit of cost."""
    S = closure(net, ())
    seq = []
    while len(S) < net.n:
        def score(i):
            c = shortfall(net, i, S)
            gain = len(closure(net, S | {i})) - len(S)
            return (-(F(gain) / c) if c else F(-10**9), i)

        i = min((b for b in net.banks if b not in S), key=score)
        seq.append(i)
        S = closure(net, S | {i})
    return sequence_cost(net, seq)[0]


def test_ratio_greedy_is_never_better_than_exact():
    worse = 0
    for net in oracle_instances(40):
        r = ratio_greedy(net)
        e = opt_exact(net).total
        assert r >= e
        worse += r > e
    assert worse > 0


class TestBounds:
    def test_half_shortfall(self):
        assert half_shortfall_bound(generate(Wheel(3))) == F(3, 2)
        assert half_shortfall_bound(PAIR) == 1 == opt_exact(PAIR).total
        assert half_shortfall_bound(build_network([2, 2], [(1, 2, 1), (2, 1, 1)])) == 0

    def test_cover_wheel(self):
        gps = min_payment_cover(generate(Wheel(3)))
        assert gps.edges == ((1, 2),) and gps.total(generate(Wheel(3))) == 1

    def test_cover_linked_pairs(self):
        net = linked_pairs()
        gps = min_payment_cover(net)
        assert gps.total(net) == 2
        for k in range(simple_cycles(net).K):
            assert set(simple_cycles(net).edges(k)) & set(gps.edges)

    def test_cover_acyclic(self):
        net = build_network([0, 0], [(1, 2, 1)])
        assert min_payment_cover(net).entries == ()

    def test_cover_prefers_cheap_shared_edge(self):
        # edge 2->3 lies on both cycles and costs 2; the two private edges cost 3 together
        net = build_network([0] * 3, [(1, 2, F(3, 2)), (2, 3, 2), (3, 1, 5), (3, 2, F(3, 2))])
        cs = simple_cycles(net)
        assert cs.K == 2
        gps = min_payment_cover(net)
        assert gps.edges == ((2, 3),) and gps.total(net) == 2

    def test_chain_of_bounds(self):
        for net in oracle_instances(40):
            cs = simple_cycles(net)
            e = opt_exact(net).total
            c = min_payment_cover(net, cs).total(net)
            assert e <= c <= cheapest_edge_sum(net, cs)
            assert e <= half_shortfall_bound(net)
            if classify_balance(net).all_exact:
                assert e == c


class TestGuarantees:
    def test_pair(self):
        gps = policy_to_payments(PAIR, opt_exact(PAIR))
        assert gps.entries == (GuaranteedPayment(2, 1, F(1)),)
        assert gps.total(PAIR) == 1

    def test_exact_balance_gives_full_weights(self):
        net = generate(Wheel(4, F(2)))
        gps = policy_to_payments(net, opt_exact(net))
        assert all(e.weight == 1 for e in gps.entries)

    def test_empty_policy(self):
        net = build_network([1, 1], [(1, 2, 1), (2, 1, 1)])
        assert policy_to_payments(net, BailoutPolicy(())).entries == ()
        assert payments_to_policy(net, GuaranteedPaymentSet(())).steps == ()

    def test_round_trip(self):
        gps = policy_to_payments(PAIR, opt_exact(PAIR))
        assert payments_to_policy(PAIR, gps).total == 1

    def test_one_edge_per_pair(self):
        gps = GuaranteedPaymentSet((GuaranteedPayment(2, 1, F(1)), GuaranteedPayment(3, 4, F(1))))
        pol = payments_to_policy(TWO_PAIRS, gps)
        assert pol.steps == ((1, F(1)), (4, F(1)))

    def test_insufficient_guarantees(self):
        gps = GuaranteedPaymentSet((GuaranteedPayment(2, 1, F(1, 2)),))
        with pytest.raises(GuaranteeError):
            payments_to_policy(PAIR, gps)
        assert not guarantees_restore_solvency(PAIR, gps)

    def test_requires_weak_balance(self):
        with pytest.raises(ValueError):
            policy_to_payments(two_way_chain(4), [1])

    def test_round_trip_random(self):
        for net in oracle_instances(40):
            pol = opt_exact(net)
            gps = policy_to_payments(net, pol)
            assert gps.total(net) == pol.total
            back = payments_to_policy(net, gps)
            assert back.total == pol.total and policy_cost(net, back).valid


class TestRecovery:
    def test_chain_bailout_recovered(self):
        net = three_equilibria()
        got = bailout_receipts(net, opt_exact(net))
        injection, receipts = got[2]
        assert injection == F(3, 4) and receipts >= injection


def test_order_matters():
    net = two_way_chain(3)
    assert policy_cost(net, [1, 3]).total == 2
    assert policy_cost(net, [3, 1]).total == 3
    assert all_orders_opt(net) == 2


@pytest.mark.parametrize("k", range(60))
def test_exact_matches_memo_oracle(k):
    rng = random.Random(k)
    net = generate(RandomSpec(rng.randint(2, 8), rng.choice((0.25, 0.4)), (1, 4), (0, 1), seed=k, balance="weak"),
                   costs=FullCosts())
    assert opt_exact(net).total == memo_opt(net)


@pytest.mark.parametrize("k", range(30))
def test_exact_matches_orders_oracle_on_twins(k):
    """Networks rich in interchangeable banks, where the twin rule prunes the most."""
    rng = random.Random(1000 + k)
    n = rng.randint(3, 7)
    d_in, d_out = F(rng.randint(1, 3)), F(rng.randint(1, 3))
    levels = [F(rng.randint(0, 3), 4) * d_in for _ in range(2)]
    p = [max(rng.choice(levels), d_in - d_out) for _ in range(n - 1)]
    p = [min(x, d_in - F(1, 4)) for x in p]
    center = F(rng.randint(0, 4 * int((n - 1) * d_out) - 1), 4)
    center = max(center, (n - 1) * (d_out - d_in))
    net = generate(StarSpec(n, d_in, d_out, tuple(p) + (center,)))
    assert any(len(c) > 1 for c in twin_classes(net)) or n == 3
    assert opt_exact(net).total == all_orders_opt(net)
