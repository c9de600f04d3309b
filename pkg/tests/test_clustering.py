import math
import random

import pytest

from localround.clustering import (
    Partition,
    base_capacity_exponent,
    capacity_exponent,
    cluster_all,
    cluster_constant,
    cluster_degree,
    cluster_degree_bound_all,
    cluster_degree_bound_fraction,
    delays_to_partition,
    mpx_randomized,
    nearby_active,
    verify_partition,
)
from localround.errors import PreconditionError
from localround.generators import complete, gnp, path
from localround.graphs import Graph, bfs_distances
from localround.ledger import RoundLedger

from conftest import random_graph


def test_capacity_exponent_basics():
    for n in (1, 2, 5, 17, 100, 5000):
        for alpha in (1, 2, 3, 5):
            log_cap = capacity_exponent(n, alpha)
            assert log_cap % alpha == 0
            assert 2**log_cap >= n * n
            assert 4**log_cap >= 50 * log_cap * n
    assert base_capacity_exponent(10) == 7  # 2^7 = 128 >= 100


def test_degree_bounds_grow_with_capacity():
    assert cluster_degree_bound_all(8, 2) == 10 * 2 * (2000 * 8) ** 4
    f = cluster_degree_bound_fraction(8, 2)
    assert f == 10 * 2 * math.ceil(1000 * math.log2(8)) ** 4


def test_zero_delays_give_singletons():
    g = random_graph(random.Random(1), 12, 0.3)
    part = delays_to_partition(g, {u: 0 for u in g.nodes}, alpha=1)
    assert all(len(members) == 1 for members in part.clusters.values())
    assert all(part.assignment[u] == u for u in g.nodes)


def test_single_early_broadcaster_takes_path():
    g = path(3)
    alpha = 1
    delays = {0: 0, 1: 50 * alpha, 2: 50 * alpha}
    part = delays_to_partition(g, delays, alpha)
    assert part.clusters == {0: frozenset({0, 1, 2})}


def test_delays_match_bruteforce_argmin():
    rng = random.Random(6)
    g = random_graph(rng, 40, 0.1)
    alpha = 2
    delays = {u: rng.randrange(0, 50 * alpha + 1) for u in g.nodes}
    part = delays_to_partition(g, delays, alpha)
    # O(n^2) oracle: all-pairs BFS then lexicographic argmin per node
    for u in g.nodes:
        best = None
        for v in g.nodes:
            dist = bfs_distances(g, v)
            if u not in dist:
                continue
            key = (delays[v] + dist[u], v)
            if best is None or key < best:
                best = key
        assert part.assignment[u] == best[1]


def test_delays_missing_node_rejected():
    g = path(3)
    with pytest.raises(PreconditionError):
        delays_to_partition(g, {0: 0, 1: 0}, alpha=1)


def test_nearby_active_examples():
    g = path(6)
    assert nearby_active(g, 2, set(), alpha=1) == frozenset()
    # only u active: everything within distance 2 that is active
    assert nearby_active(g, 2, {2}, alpha=1) == frozenset({2})
    assert nearby_active(g, 2, {2, 3, 5}, alpha=1) == frozenset({2, 3})
    # endpoints active: d(3, {0,5}) = 2, so the radius-4 ball catches both
    got = nearby_active(g, 3, {0, 5}, alpha=1)
    assert got == frozenset({0, 5})
    # node 1 sits at distance 1 from 0; radius 3 misses the far endpoint
    assert nearby_active(g, 1, {0, 5}, alpha=1) == frozenset({0})


def test_nearby_active_radius_cap():
    g = path(300)
    # nearest active node is 250 hops away; the ball caps at 100*alpha
    got = nearby_active(g, 0, {250}, alpha=1)
    assert got == frozenset()
    got = nearby_active(g, 0, {99}, alpha=1)
    assert got == frozenset({99})


def test_mpx_alpha_equals_capacity_is_half_rate():
    g = gnp(30, 0.1, seed=3)
    alpha = capacity_exponent(g.n, 1)
    part = mpx_randomized(g, alpha, seed=5)
    report = verify_partition(g, part, alpha)
    assert report["ok"]


def test_mpx_single_node():
    g = Graph(nodes=[7])
    part = mpx_randomized(g, 2, seed=1)
    assert part.clusters == {7: frozenset({7})}


def test_mpx_partition_and_determinism():
    g = gnp(120, 0.05, seed=9)
    a = mpx_randomized(g, 3, seed=4)
    b = mpx_randomized(g, 3, seed=4)
    assert a.clusters == b.clusters
    report = verify_partition(g, a, 3)
    assert report["ok"]
    assert report["max_diameter"] <= 100 * 3


def test_cluster_constant_edgeless_all_good():
    g = Graph(nodes=range(10))
    weights = {u: 0.5 for u in g.nodes}
    part = cluster_constant(g, 2, weights)
    assert all(len(m) == 1 for m in part.clusters.values())
    bound = part.meta["degree_bound"]
    good = [u for u in g.nodes if cluster_degree(g, part, u) <= bound]
    assert sum(weights[u] for u in good) >= 0.9 * sum(weights.values())


def test_cluster_constant_clique():
    g = complete(12)
    weights = {u: 1.0 / 12 for u in g.nodes}
    part = cluster_constant(g, 2, weights)
    report = verify_partition(g, part, 2, part.meta["degree_bound"])
    assert report["ok"]


def test_cluster_constant_weight_window_enforced():
    g = path(4)
    with pytest.raises(PreconditionError):
        cluster_constant(g, 1, {u: 2.0 for u in g.nodes})


def test_cluster_constant_weighted_good_fraction():
    g = gnp(150, 0.04, seed=12)
    rng = random.Random(3)
    weights = {u: min(1.0, 1.0 / g.n + rng.random() * 0.5) for u in g.nodes}
    led = RoundLedger()
    part = cluster_constant(g, 3, weights, led)
    bound = part.meta["degree_bound"]
    good = [u for u in g.nodes if cluster_degree(g, part, u) <= bound]
    assert sum(weights[u] for u in good) >= 0.9 * sum(weights.values())
    assert part.meta["actives"][-1] == frozenset()
    assert led.total > 0


def test_cluster_all_edgeless():
    g = Graph(nodes=range(9))
    part = cluster_all(g, 2)
    report = verify_partition(g, part, 2, part.meta["degree_bound"])
    assert report["ok"]
    assert report["max_cluster_degree"] == 1
    assert report["max_diameter"] == 0


def test_cluster_all_path_bounds():
    g = path(100)
    alpha = 4
    part = cluster_all(g, alpha)
    log_cap = part.meta["log2_capacity"]
    bound = cluster_degree_bound_all(log_cap, alpha)
    report = verify_partition(g, part, alpha, bound)
    assert report["ok"]
    assert report["max_diameter"] <= 100 * alpha
    assert report["max_cluster_degree"] <= bound
    assert part.meta["actives"][-1] == frozenset()


def test_cluster_all_active_sets_vanish_and_claims_recorded():
    g = gnp(80, 0.08, seed=5)
    part = cluster_all(g, 2)
    claims = part.meta["claims"]
    assert claims["no-active-at-end"] == 1
    assert claims["pipeline-bad-count"] > 0
    assert part.meta["actives"][1] == frozenset()  # nothing survives phase 0


def test_cluster_degree_bound_via_surviving_radius():
    # measured cluster degree never exceeds 10*alpha*R for the largest
    # nearby-active set whose successor misses it entirely
    g = gnp(60, 0.08, seed=21)
    alpha = 2
    part = cluster_all(g, alpha)
    actives = part.meta["actives"]
    rng = random.Random(2)
    for u in rng.sample(g.nodes, 10):
        r_u = 0
        for i in range(10 * alpha):
            s_i = nearby_active(g, u, actives[i], alpha)
            if s_i and not (s_i & actives[i + 1]):
                r_u = max(r_u, len(s_i))
        if r_u:
            assert cluster_degree(g, part, u) <= 10 * alpha * r_u


def test_cluster_connectivity_and_center_radius():
    g = gnp(70, 0.07, seed=8)
    alpha = 2
    part = cluster_all(g, alpha)
    from localround.graphs import induced_subgraph

    for c, members in part.clusters.items():
        sub = induced_subgraph(g, members)
        dist = bfs_distances(sub, c)
        assert set(dist) == set(members)  # connected through the cluster
        assert max(dist.values()) <= 50 * alpha


def test_verify_partition_examples():
    g = Graph(nodes=range(5))
    part = delays_to_partition(g, {u: 0 for u in g.nodes}, 1)
    report = verify_partition(g, part, 1)
    assert report["max_diameter"] == 0
    assert report["degree_histogram"] == {1: 5}

    g2 = path(10)
    whole = Partition(
        1,
        {0: frozenset(g2.nodes)},
        {u: 0 for u in g2.nodes},
        {u: 0 for u in g2.nodes},
    )
    report2 = verify_partition(g2, whole, 1)
    assert report2["max_diameter"] == 9


def test_verify_partition_rejects_non_partition():
    g = path(4)
    bad = Partition(1, {0: frozenset({0, 1})}, {0: 0, 1: 0}, {0: 0, 1: 0})
    with pytest.raises(PreconditionError):
        verify_partition(g, bad, 1)


def test_partition_json_roundtrip():
    g = gnp(25, 0.15, seed=14)
    part = cluster_all(g, 2)
    data = part.to_json_dict()
    back = Partition.from_json_dict(data)
    assert back.clusters == part.clusters
    assert back.assignment == part.assignment
    assert back.delays == part.delays


def test_partition_restrict():
    g = gnp(30, 0.2, seed=2)
    part = cluster_all(g, 2)
    keep = set(list(g.nodes)[:15])
    sub = part.restrict(keep)
    assert set(sub.assignment) == keep
    for c, members in sub.clusters.items():
        assert members <= keep
        assert members == part.clusters[c] & keep


def test_mpx_baseline_against_deterministic():
    # empirical cluster degrees over 20 seeds, recorded next to the
    # deterministic construction on the same graph and radius parameter
    g = gnp(300, 0.02, seed=40)
    alpha = max(1, math.ceil(math.sqrt(math.log2(g.n))))
    mpx_degrees = []
    for seed in range(20):
        part = mpx_randomized(g, alpha, seed=seed)
        report = verify_partition(g, part, alpha)
        assert report["ok"]
        mpx_degrees.append(report["max_cluster_degree"])
    det = cluster_all(g, alpha)
    det_report = verify_partition(g, det, alpha, det.meta["degree_bound"])
    assert det_report["ok"]
    # both stay far below the certified bound; the comparison is recorded
    assert max(mpx_degrees) <= det.meta["degree_bound"]
    assert det_report["max_cluster_degree"] <= det.meta["degree_bound"]


class _AlwaysKeep:
    def random(self):
        return 0.0


def test_mpx_retry_budget(monkeypatch):
    # if subsampling never drops anyone, the active set survives every
    # phase and the seeded attempts run out
    import localround.clustering as clustering_module
    from localround.errors import RetryBudgetExceeded

    monkeypatch.setattr(clustering_module, "stream", lambda *a: _AlwaysKeep())
    g = path(6)
    with pytest.raises(RetryBudgetExceeded):
        mpx_randomized(g, 2, seed=0, attempts=3)


def test_cluster_constant_uniform_weights_at_scale():
    g = gnp(500, 0.01, seed=61)
    alpha = max(1, math.ceil(base_capacity_exponent(g.n) ** (1.0 / 3.0)))
    weights = {u: 1.0 / g.n for u in g.nodes}
    part = cluster_constant(g, alpha, weights)
    bound = part.meta["degree_bound"]
    good = [u for u in g.nodes if cluster_degree(g, part, u) <= bound]
    assert sum(weights[u] for u in good) >= 0.9 * sum(weights.values())
    report = verify_partition(g, part, alpha)
    assert report["ok"]
    claims = part.meta["claims"]
    assert claims["active-mass"] > 0 and claims["shrink-bad-mass"] > 0


def test_cluster_all_sparse_ids():
    rng = random.Random(31)
    from conftest import relabel

    g = relabel(gnp(50, 0.1, seed=13), rng)
    part = cluster_all(g, 2)
    report = verify_partition(g, part, 2, part.meta["degree_bound"])
    assert report["ok"]
