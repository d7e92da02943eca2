from fractions import Fraction as F

import pytest

from creditfreeze.corpus import linked_pairs, ladder
from creditfreeze.cycles import has_dependency_cycle
from creditfreeze.generators import RandomSpec, Wheel, generate
from creditfreeze.network import (
    CanonicalCosts,
    FinancialNetwork,
    FullCosts,
    NetworkError,
    as_amount,
    build_network,
    classify_balance,
    compress,
    is_weakly_balanced,
    net_imbalance_injections,
    reduce_modulo_solvent,
    validate_network,
)


def raw(banks, debts):
    return {
        "banks": [{"id": i, "p": p} for i, p in banks],
        "debts": [{"debtor": d, "creditor": c, "amount": a} for d, c, a in debts],
    }


class TestAmounts:
    def test_strings_and_ints(self):
        assert as_amount("2/7") == F(2, 7)
        assert as_amount("0.25") == F(1, 4)
        assert as_amount(3) == F(3)

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            as_amount(0.5)

    def test_garbage_refused(self):
        with pytest.raises(ValueError):
            as_amount("one half")


class TestValidate:
    def test_linked_pairs_is_valid(self):
        net = linked_pairs()
        assert net.n == 3
        assert net.amount(2, 1) == 1 and net.amount(1, 2) == 1
        assert net.assets[2] == 2 and net.liabilities[2] == 2
        assert net.costs == CanonicalCosts(F(1, 2), F(0))

    def test_single_bank(self):
        net = validate_network(raw([(1, 5)], []))
        assert net.assets[1] == 0 and net.liabilities[1] == 0

    def test_self_edge(self):
        with pytest.raises(NetworkError) as exc:
            validate_network(raw([(1, 0)], [(1, 1, 2)]))
        assert "self-edge" in str(exc.value)

    def test_collects_every_error(self):
        with pytest.raises(NetworkError) as exc:
            validate_network(raw([(1, 0), (2, "-1")], [(1, 2, 1), (1, 2, 1), (2, 7, 1), (1, 2, 0)]))
        text = " | ".join(exc.value.errors)
        for needle in ("negative", "duplicate edge", "unknown bank id 7", "zero amount"):
            assert needle in text
        assert len(exc.value.errors) == 4

    def test_negative_debt(self):
        with pytest.raises(NetworkError, match="negative amount"):
            validate_network(raw([(1, 0), (2, 0)], [(1, 2, "-1")]))

    def test_zero_banks(self):
        with pytest.raises(NetworkError, match="zero banks"):
            validate_network({"banks": [], "debts": []})

    def test_ids_must_be_contiguous(self):
        with pytest.raises(NetworkError, match="1..2"):
            validate_network(raw([(1, 0), (3, 0)], []))

    def test_parallel_debts_merge_when_asked(self):
        net = validate_network(raw([(1, 0), (2, 0)], [(1, 2, 1), (1, 2, "1/2")]), merge_parallel=True)
        assert net.debts == {(1, 2): F(3, 2)}

    def test_costs_are_checked(self):
        with pytest.raises(NetworkError):
            CanonicalCosts(F(3, 2), F(0))
        with pytest.raises(NetworkError):
            CanonicalCosts(F(1, 2), F(-1))

    def test_full_equals_canonical_one_zero(self):
        assert FullCosts().rates == CanonicalCosts(F(1), F(0)).rates

    def test_direct_construction_validates(self):
        with pytest.raises(NetworkError):
            FinancialNetwork((F(0), F(0)), {(1, 3): F(1)})


class TestBalance:
    def test_linked_pairs(self):
        rep = classify_balance(linked_pairs())
        assert rep.all_weak
        assert rep.unilaterally_solvent == {1: True, 2: False, 3: False}

    def test_wheel_is_exact_and_critical(self):
        rep = classify_balance(generate(Wheel(3)))
        assert rep.all_exact and rep.all_critical
        assert not any(rep.unilaterally_solvent.values())

    def test_buffer(self):
        rep = classify_balance(build_network([2, 0], [(1, 2, 1)]))
        assert rep.unilaterally_solvent[1]
        assert rep.weakly_balanced[2] and not rep.exactly_balanced[2]
        assert not rep.exactly_balanced[1]

    def test_critical_needs_each_claim(self):
        # bank 2 holds two claims of 1 and owes 1: losing either still leaves it solvent
        net = build_network([0, 0, 0], [(1, 2, 1), (3, 2, 1), (2, 1, 1)])
        rep = classify_balance(net)
        assert rep.weakly_balanced[2] and not rep.critically_balanced[2]
        net2 = build_network([0, 0, 0], [(1, 2, 1), (3, 2, 1), (2, 1, 2)])
        assert classify_balance(net2).critically_balanced[2]


class TestInjections:
    def test_ladder(self):
        assert net_imbalance_injections(ladder()) == (1, 0, 0, 0, 0)

    def test_weakly_balanced_gives_zero(self):
        assert set(net_imbalance_injections(linked_pairs())) == {0}

    def test_outside_liability(self):
        assert net_imbalance_injections(build_network([1], [], ext_liability=[3])) == (2,)

    def test_minimal(self):
        net = generate(RandomSpec(6, 0.5, seed=4))
        t = net_imbalance_injections(net)
        assert is_weakly_balanced(net.with_p(p + x for p, x in zip(net.p, t)))
        for k, x in enumerate(t):
            if x:
                smaller = list(t)
                smaller[k] -= F(1, 1000)
                assert not is_weakly_balanced(net.with_p(p + y for p, y in zip(net.p, smaller)))


class TestCompress:
    def test_wheel_nets_out(self):
        assert compress(generate(Wheel(3))).debts == {}

    def test_linked_pairs_nets_out(self):
        assert compress(linked_pairs()).debts == {}

    def test_acyclic_unchanged(self):
        net = build_network([0, 0, 0], [(1, 2, 1), (2, 3, 2)])
        assert compress(net) == net

    def test_order_is_deterministic(self):
        net = build_network([0, 0, 0], [(1, 2, 2), (2, 1, 1), (2, 3, 1), (3, 1, 3)])
        out = compress(net)
        assert out.debts == {(3, 1): F(2)}
        assert not has_dependency_cycle(out)

    def test_keeps_p_and_outside(self):
        net = build_network([1, 2], [(1, 2, 3), (2, 1, 1)], ext_liability=[0, 5])
        out = compress(net)
        assert out.p == net.p and out.ext_liability == net.ext_liability
        assert out.debts == {(1, 2): F(2)}


class TestReduce:
    def test_ladder_middle_equilibrium(self):
        red = reduce_modulo_solvent(ladder(), {1, 2, 3}, [1, 0, 0, 0, 0])
        assert red.original_ids == (4, 5)
        assert red.network.p == (F(7, 4), F(0))
        assert red.network.ext_liability == (F(1, 4), F(0))
        assert red.network.debts == {(1, 2): F(1), (2, 1): F(1)}

    def test_ladder_worst_equilibrium(self):
        red = reduce_modulo_solvent(ladder(), {1}, [1, 0, 0, 0, 0])
        assert red.original_ids == (2, 3, 4, 5)
        assert red.network.p[0] == 1
        assert red.to_original(1) == 2

    def test_everything_removed(self):
        red = reduce_modulo_solvent(linked_pairs(), {1, 2, 3})
        assert red.network is None and red.original_ids == ()

    def test_inconsistent_set(self):
        with pytest.raises(NetworkError, match="not solvent"):
            reduce_modulo_solvent(ladder(), {1, 2, 3})

    def test_unknown_id(self):
        with pytest.raises(NetworkError):
            reduce_modulo_solvent(linked_pairs(), {9})

    def test_value_conserved(self):
        net = ladder()
        t = [1, 0, 0, 0, 0]
        S = {1, 2, 3}
        red = reduce_modulo_solvent(net, S, t)
        keep = red.original_ids
        flow = sum(a for (d, c), a in net.debts.items() if d in S and c in keep)
        assert sum(red.network.p) == sum(net.p_of(i) + t[i - 1] for i in keep) + flow
