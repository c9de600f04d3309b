import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localround.errors import ClaimChecker, PreconditionError
from localround.graphs import Graph
from localround.ledger import RoundLedger
from localround.oracles import exhaustive_round_check
from localround.rounding import (
    Coloring,
    FractionalAssignment,
    UtilityCostInstance,
    evaluate,
    greedy_color,
    is_proper,
    round_labels,
)

from conftest import random_graph, random_objective


def test_evaluate_single_node_integral():
    g = Graph(nodes=[0])
    inst = UtilityCostInstance(g, 2, {0: ((0.0, 1.0), None)})
    assert evaluate(inst, {0: 1}) == (1.0, 0.0)
    assert evaluate(inst, {0: 0}) == (0.0, 0.0)


def test_evaluate_pairwise_product():
    g = Graph(edges=[(0, 1)])
    inst = UtilityCostInstance(
        g, 2, edge_terms={(0, 1): (((0.0, 0.0), (0.0, 1.0)), None)}
    )
    lam = FractionalAssignment({0: (0.5, 0.5), 1: (0.5, 0.5)})
    utility, cost = evaluate(inst, lam)
    assert utility == pytest.approx(0.25)
    assert cost == 0.0


def test_evaluate_matches_exhaustive_expectation():
    rng = random.Random(42)
    for _ in range(20):
        inst, lam = random_objective(rng, max_nodes=8, require_precondition=False)
        _, expected = exhaustive_round_check(inst, lam)
        u0, c0 = evaluate(inst, lam)
        assert u0 - c0 == pytest.approx(expected, abs=1e-9, rel=1e-9)


def test_evaluate_missing_node():
    g = Graph(nodes=[0, 1])
    inst = UtilityCostInstance(g, 2)
    with pytest.raises(PreconditionError):
        evaluate(inst, {0: 1})


def test_instance_rejects_non_conflict_edge_terms():
    g = Graph(nodes=[0, 1])  # no edge
    with pytest.raises(PreconditionError):
        UtilityCostInstance(g, 2, edge_terms={(0, 1): (None, None)})


def test_greedy_color_edgeless():
    g = Graph(nodes=[3, 1, 4])
    col = greedy_color(g)
    assert set(col.colors.values()) == {0}


def test_greedy_color_clique():
    g = Graph(edges=[(a, b) for a in range(4) for b in range(a + 1, 4)])
    col = greedy_color(g)
    assert col.num_colors == 4
    assert len(set(col.colors.values())) == 4


def test_greedy_color_proper_and_bounded():
    rng = random.Random(9)
    g = random_graph(rng, 50, 0.1)
    col = greedy_color(g)
    for u, v in g.edges():  # edge-scan properness oracle
        assert col.colors[u] != col.colors[v]
    assert col.num_colors <= g.max_degree() + 1


def test_round_integral_fixed_point():
    # integral assignment already at the per-node maximizer stays put
    g = Graph(edges=[(0, 1)])
    inst = UtilityCostInstance(
        g,
        2,
        {0: ((0.0, 2.0), None), 1: ((0.0, 2.0), None)},
        {(0, 1): (None, ((0.0, 0.0), (0.0, 1.0)))},
    )
    lam = FractionalAssignment({0: (0.0, 1.0), 1: (0.0, 1.0)})
    labels = round_labels(inst, lam, greedy_color(g))
    assert labels == {0: 1, 1: 1}
    before = evaluate(inst, lam)
    after = evaluate(inst, labels)
    assert before == after


def test_round_single_node_picks_maximizer():
    g = Graph(nodes=[0])
    inst = UtilityCostInstance(g, 2, {0: ((0.0, 1.0), None)})
    lam = FractionalAssignment({0: (0.3, 0.7)})
    assert round_labels(inst, lam, greedy_color(g)) == {0: 1}


def test_round_ties_prefer_smaller_label():
    g = Graph(nodes=[0])
    inst = UtilityCostInstance(g, 2, {0: ((0.5, 0.5), None)})
    lam = FractionalAssignment({0: (0.5, 0.5)})
    assert round_labels(inst, lam, greedy_color(g)) == {0: 0}


def test_round_contract_on_random_instances():
    rng = random.Random(7)
    for _ in range(60):
        inst, lam = random_objective(rng, max_nodes=8)
        col = greedy_color(inst.conflict_graph)
        labels = round_labels(inst, lam, col)
        u0, c0 = evaluate(inst, lam)
        uf, cf = evaluate(inst, labels)
        assert uf - cf >= 0.9 * (u0 - c0) - 1e-9
        assert uf - cf >= (u0 - c0) - 1e-9
        best, expected = exhaustive_round_check(inst, lam)
        assert uf - cf >= expected - 1e-9
        assert uf - cf <= best + 1e-9


def test_round_precondition_rejected_with_measurements():
    g = Graph(nodes=[0])
    inst = UtilityCostInstance(g, 2, {0: ((0.0, 1.0), (0.0, 0.99))})
    lam = FractionalAssignment({0: (0.0, 1.0)})
    with pytest.raises(PreconditionError, match="utility"):
        round_labels(inst, lam, greedy_color(g))


def test_round_improper_coloring_rejected():
    g = Graph(edges=[(0, 1)])
    inst = UtilityCostInstance(g, 2, {0: ((0.0, 1.0), None)})
    lam = FractionalAssignment({0: (0.5, 0.5), 1: (0.5, 0.5)})
    bad = Coloring({0: 0, 1: 0}, 1)
    assert not is_proper(g, bad)
    with pytest.raises(PreconditionError, match="proper"):
        round_labels(inst, lam, bad)


def test_round_charges_ledger():
    rng = random.Random(3)
    inst, lam = random_objective(rng, max_nodes=6)
    col = greedy_color(inst.conflict_graph)
    led = RoundLedger()
    round_labels(inst, lam, col, ledger=led, charge_label="probe")
    assert led.report()["rows"][0]["label"] == "probe"
    assert led.total == 2 * col.num_colors


def test_round_deterministic():
    rng = random.Random(12)
    inst, lam = random_objective(rng, max_nodes=7)
    col = greedy_color(inst.conflict_graph)
    assert round_labels(inst, lam, col) == round_labels(inst, lam, col)


def test_round_monotone_counted():
    rng = random.Random(15)
    inst, lam = random_objective(rng, max_nodes=7)
    col = greedy_color(inst.conflict_graph)
    checks = ClaimChecker()
    round_labels(inst, lam, col, checks=checks)
    assert checks.counts["rounding-monotone"] == col.num_colors
    assert checks.counts["rounding-no-loss"] == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_round_never_below_fractional(seed):
    rng = random.Random(seed)
    inst, lam = random_objective(rng, max_nodes=6)
    labels = round_labels(inst, lam, greedy_color(inst.conflict_graph))
    u0, c0 = evaluate(inst, lam)
    uf, cf = evaluate(inst, labels)
    assert uf - cf >= (u0 - c0) - 1e-9


def test_three_label_alphabet():
    rng = random.Random(21)
    inst, lam = random_objective(rng, max_nodes=5, num_labels=3)
    labels = round_labels(inst, lam, greedy_color(inst.conflict_graph))
    assert set(labels) == set(inst.conflict_graph.nodes)
    assert all(0 <= lab < 3 for lab in labels.values())
