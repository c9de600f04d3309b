"""Deterministic maximal independent set via derandomized mark-and-keep
iterations.

Each iteration marks a set of nodes, keeps the marked nodes with no
marked out-neighbor under the (degree, id) orientation, and removes the
kept nodes with their neighborhoods.  A linear-minus-quadratic estimator
in the marking probabilities lower-bounds the removed edges using only
pairwise products, so the local rounding engine can pick the marks
deterministically.  Before rounding, a per-cluster step floors all
surviving marking probabilities, which keeps the rounding cheap; the
clusters come from one upfront `cluster_all` partition.

Every iteration removes at least a 1/24000 fraction of the remaining
edges, checked exactly, so the loop ends within O(log m) iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .clustering import Partition, base_capacity_exponent, cluster_all
from .errors import ClaimChecker, PreconditionError, RetryBudgetExceeded, geq, leq
from .graphs import Graph, Orientation, induced_subgraph, orient, square_graph
from .ledger import RoundLedger
from .rounding import (
    FractionalAssignment,
    UtilityCostInstance,
    evaluate,
    greedy_color,
    round_labels,
)
from .seeds import stream


def good_vertices(
    h: Graph, orientation: Orientation | None = None, checks: ClaimChecker | None = None
) -> frozenset[int]:
    """Nodes with at least a third of their edges incoming.

    Their degrees always carry at least half of all edges: an edge into a
    non-good node charges two edges leaving it, so at most half the edges
    point into non-good nodes.
    """
    checks = checks if checks is not None else ClaimChecker()
    if h.m == 0:
        raise PreconditionError("good vertices need at least one edge")
    orientation = orientation or orient(h)
    good = frozenset(
        v for v in h.nodes if 3 * len(orientation.in_neighbors(v)) >= h.degree(v)
    )
    checks.ok(
        "good-degree-mass",
        2 * sum(h.degree(v) for v in good) >= h.m,
        "good vertices carry less than half the edges",
    )
    return good


def select_witnesses(h: Graph, orientation: Orientation, v: int) -> tuple[int, ...]:
    """Prefix of v's in-neighbors (increasing id) whose inverse degrees
    first reach 1/3; the sum stays at most 4/3 since each term is <= 1."""
    total = 0.0
    chosen: list[int] = []
    for u in orientation.in_neighbors(v):
        chosen.append(u)
        total += 1.0 / h.degree(u)
        if total >= 1.0 / 3.0:
            return tuple(chosen)
    raise PreconditionError(f"node {v} is not good: inverse-degree sum {total}")


def intra_round_mis(
    h: Graph,
    partition: Partition,
    bound: float,
    seed: int,
    n_total: int | None = None,
    retries: int = 200,
    checks: ClaimChecker | None = None,
    orientation: Orientation | None = None,
    witnesses: Mapping[int, tuple[int, ...]] | None = None,
) -> dict[int, float]:
    """Per-cluster flooring of the marking probabilities.

    Nodes of degree at most 1000*bound*log2(n) keep probability
    1/(10*deg); larger degrees are resampled to the floor value
    1/(10000*bound*log2(n)) with matching expectation.  Each cluster is
    verified against its windows (witness sums per good node, outgoing
    sums per node) and resampled on failure, so the values in a cluster
    depend only on that cluster's members, the seed, and its label.
    """
    checks = checks if checks is not None else ClaimChecker()
    orientation = orientation or orient(h)
    if witnesses is None:
        witnesses = {
            v: select_witnesses(h, orientation, v)
            for v in sorted(good_vertices(h, orientation, checks))
        }
    if any(h.degree(u) == 0 for u in h.nodes):
        raise PreconditionError("isolated nodes belong in the output, not here")
    n = n_total if n_total is not None else h.n
    log_n = math.log2(max(2, n))
    deg_cutoff = 1000.0 * bound * log_n
    floor_value = 1.0 / (10000.0 * bound * log_n)
    max_cluster_deg = 0
    for u in h.nodes:
        seen = {partition.assignment[u]}
        for w in h.neighbors(u):
            seen.add(partition.assignment[w])
        max_cluster_deg = max(max_cluster_deg, len(seen))
    if bound < max_cluster_deg:
        raise PreconditionError(
            f"bound {bound} below the measured cluster degree {max_cluster_deg}"
        )

    in_groups: dict[int, dict[int, list[int]]] = {}
    out_groups: dict[int, dict[int, list[int]]] = {}
    for v, members in witnesses.items():
        for u in members:
            in_groups.setdefault(partition.assignment[u], {}).setdefault(v, []).append(u)
    for u in h.nodes:
        for w in orientation.out_neighbors(u):
            out_groups.setdefault(partition.assignment[w], {}).setdefault(u, []).append(w)

    slack = 1.0 / (100.0 * bound)
    out: dict[int, float] = {}
    for c in sorted(partition.clusters):
        members = sorted(partition.clusters[c])
        for attempt in range(retries):
            rng = stream(seed, "mis-intra", c, attempt)
            trial: dict[int, float] = {}
            for u in members:
                deg = h.degree(u)
                if deg <= deg_cutoff:
                    trial[u] = 1.0 / (10.0 * deg)
                else:
                    hit = rng.random() < 1000.0 * bound * log_n / deg
                    trial[u] = floor_value if hit else 0.0
            ok = True
            for v, group in in_groups.get(c, {}).items():
                inv = sum(1.0 / h.degree(u) for u in group)
                got = sum(trial[u] for u in group)
                if not (geq(got, inv / 20.0 - slack) and leq(got, inv / 5.0 + slack)):
                    ok = False
                    break
            if ok:
                for u, group in out_groups.get(c, {}).items():
                    inv = sum(1.0 / h.degree(w) for w in group)
                    got = sum(trial[w] for w in group)
                    if not leq(got, inv / 5.0 + slack):
                        ok = False
                        break
            if ok:
                checks.ok("intra-cluster-window", True)
                out.update(trial)
                break
        else:
            raise RetryBudgetExceeded(
                f"cluster {c} failed its windows {retries} times"
            )

    for v, members in witnesses.items():
        mass = sum(out[u] for u in members)
        checks.ok(
            "witness-mass-window",
            geq(mass, 1.0 / 1000.0) and leq(mass, 1.0 / 3.0),
            f"witness mass {mass} for node {v} outside [1/1000, 1/3]",
        )
    for u in h.nodes:
        mass = sum(out[w] for w in orientation.out_neighbors(u))
        checks.ok(
            "out-mass-cap",
            leq(mass, 1.0 / 4.0),
            f"outgoing mass {mass} at node {u} above 1/4",
        )
    return out


def build_mis_instance(
    h: Graph,
    witnesses: Mapping[int, tuple[int, ...]],
    x_intra: Mapping[int, float],
    orientation: Orientation | None = None,
    checks: ClaimChecker | None = None,
) -> UtilityCostInstance:
    """Removed-edges estimator as a pairwise objective on the square graph.

    Utility: sum over good v of (deg(v)/2) * sum of witness marks.
    Cost:    same weights on ordered witness pairs and on witness ->
             out-neighbor pairs.  For integral marks, utility - cost
             lower-bounds the number of edges removed this iteration.
    """
    checks = checks if checks is not None else ClaimChecker()
    orientation = orientation or orient(h)
    conflict = square_graph(h)
    lin: dict[int, float] = {}
    pair_cost: dict[tuple[int, int], float] = {}

    def bump(a: int, b: int, w: float) -> None:
        key = (a, b) if a < b else (b, a)
        pair_cost[key] = pair_cost.get(key, 0.0) + w

    for v, members in witnesses.items():
        half_deg = h.degree(v) / 2.0
        for u in members:
            lin[u] = lin.get(u, 0.0) + half_deg
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                bump(members[i], members[j], 2.0 * half_deg)
        for u in members:
            for w in orientation.out_neighbors(u):
                bump(u, w, half_deg)

    node_terms = {u: ((0.0, coef), None) for u, coef in lin.items()}
    edge_terms = {
        key: (None, ((0.0, 0.0), (0.0, coef))) for key, coef in pair_cost.items()
    }
    inst = UtilityCostInstance(conflict, 2, node_terms, edge_terms)
    lam = FractionalAssignment(
        {u: (1.0 - x_intra[u], x_intra[u]) for u in h.nodes}
    )
    fu, fc = evaluate(inst, lam)
    checks.ok(
        "estimator-slack",
        geq(fu - fc, fu / 3.0),
        f"estimator slack too small: utility {fu}, cost {fc}",
    )
    return inst


@dataclass
class IterationOutcome:
    added: frozenset[int]
    removed: frozenset[int]
    edges_before: int
    edges_removed: int
    zeta: int


def luby_derandomized_iteration(
    h: Graph,
    partition: Partition,
    bound: float,
    seed: int,
    n_total: int | None = None,
    ledger: RoundLedger | None = None,
    retries: int = 200,
    checks: ClaimChecker | None = None,
) -> IterationOutcome:
    """One derandomized mark-and-keep iteration on h."""
    checks = checks if checks is not None else ClaimChecker()
    if h.m == 0:
        raise PreconditionError("iteration needs at least one edge")
    orientation = orient(h)
    good = good_vertices(h, orientation, checks)
    witnesses = {v: select_witnesses(h, orientation, v) for v in sorted(good)}
    for v, members in witnesses.items():
        inv = sum(1.0 / h.degree(u) for u in members)
        checks.ok(
            "witness-weight-window",
            geq(inv, 1.0 / 3.0) and leq(inv, 4.0 / 3.0),
            f"witness inverse-degree sum {inv} at node {v}",
        )
    x_intra = intra_round_mis(
        h, partition, bound, seed, n_total, retries, checks, orientation, witnesses
    )
    inst = build_mis_instance(h, witnesses, x_intra, orientation, checks)
    lam = FractionalAssignment({u: (1.0 - x_intra[u], x_intra[u]) for u in h.nodes})
    coloring = greedy_color(inst.conflict_graph)
    if ledger is not None:
        ledger.charge("mark-structure", 2, 2)
        # gather + scatter per cluster; weak radius bounded by construction
        radius = 50 * partition.alpha + 2
        ledger.charge("intra-gather", radius, 2 * radius)
    labels = round_labels(
        inst, lam, coloring, ledger, "mark-rounding", hop_scale=4, checks=checks
    )
    fu, fc = evaluate(inst, lam)
    yu, yc = evaluate(inst, labels)
    checks.ok(
        "rounded-estimator-half",
        geq(yu - yc, 0.5 * (fu - fc)),
        f"rounded estimator {yu - yc} below half of {fu - fc}",
    )

    marked = {u for u in h.nodes if labels[u] == 1}
    added = frozenset(
        u
        for u in sorted(marked)
        if not any(w in marked for w in orientation.out_neighbors(u))
    )
    removed = set(added)
    for u in added:
        removed.update(h.neighbors(u))
    surviving = sum(1 for a, b in h.edges() if a not in removed and b not in removed)
    edges_removed = h.m - surviving
    checks.ok(
        "estimator-sound",
        edges_removed + 1e-6 >= yu - yc,
        f"estimator {yu - yc} exceeds actual removals {edges_removed}",
    )
    checks.ok(
        "removed-edges-floor",
        edges_removed * 24000 >= h.m,
        f"removed {edges_removed} of {h.m} edges",
    )
    return IterationOutcome(
        added, frozenset(removed), h.m, edges_removed, coloring.num_colors
    )


@dataclass
class MisResult:
    independent_set: frozenset[int]
    iterations: int
    removed_fractions: list[float]
    alpha: int
    degree_bound: float
    log2_capacity: int
    checks: dict[str, int] = field(default_factory=dict)


def mis(
    g: Graph,
    alpha: int | None = None,
    seed: int = 0,
    f_override: float | None = None,
    ledger: RoundLedger | None = None,
    retries: int = 200,
) -> MisResult:
    """Maximal independent set of g; clusters once, then iterates.

    The partition is restricted to the surviving nodes before every
    iteration, and nodes isolated by removals join the output directly.
    """
    checks = ClaimChecker()
    if g.n == 0:
        return MisResult(frozenset(), 0, [], alpha or 1, 0.0, 0, checks.counts)
    if alpha is None:
        alpha = max(1, math.ceil(math.sqrt(base_capacity_exponent(g.n))))
    partition = cluster_all(g, alpha, ledger)
    log_n_cap = partition.meta["log2_capacity"]
    bound = float(
        f_override if f_override is not None else partition.meta["degree_bound"]
    )

    chosen: set[int] = set()
    current = g
    isolated = [u for u in current.nodes if current.degree(u) == 0]
    chosen.update(isolated)
    current = induced_subgraph(current, set(current.nodes) - set(isolated))

    fractions: list[float] = []
    max_iterations = math.ceil(24000 * math.log(g.m + 1)) + 1 if g.m else 0
    iterations = 0
    while current.m > 0:
        outcome = luby_derandomized_iteration(
            current,
            partition.restrict(current.nodes),
            bound,
            seed,
            g.n,
            ledger,
            retries,
            checks,
        )
        fractions.append(outcome.edges_removed / outcome.edges_before)
        chosen.update(outcome.added)
        keep = set(current.nodes) - set(outcome.removed)
        current = induced_subgraph(current, keep)
        isolated = [u for u in current.nodes if current.degree(u) == 0]
        chosen.update(isolated)
        current = induced_subgraph(current, set(current.nodes) - set(isolated))
        iterations += 1
        checks.ok(
            "iteration-count",
            iterations <= max_iterations,
            f"{iterations} iterations exceed the guaranteed {max_iterations}",
        )
    chosen.update(current.nodes)
    checks.ok("mis-valid", verify_mis(g, chosen), "output not a maximal independent set")
    return MisResult(
        frozenset(chosen),
        iterations,
        fractions,
        alpha,
        bound,
        log_n_cap,
        checks.counts,
    )


@dataclass
class LubyResult:
    independent_set: frozenset[int]
    iterations: int
    removed_fractions: list[float]


def luby_randomized(g: Graph, seed: int, max_stall: int | None = None) -> LubyResult:
    """Randomized baseline: mark with probability 1/(10*deg), keep marked
    nodes with no marked out-neighbor."""
    rng = stream(seed, "luby")
    chosen: set[int] = set()
    current = g
    fractions: list[float] = []
    iterations = 0
    cap = max_stall if max_stall is not None else 10 * g.n + 1000
    while True:
        isolated = [u for u in current.nodes if current.degree(u) == 0]
        chosen.update(isolated)
        current = induced_subgraph(current, set(current.nodes) - set(isolated))
        if current.m == 0:
            break
        orientation = orient(current)
        marked = {
            u
            for u in current.nodes
            if rng.random() < 1.0 / (10.0 * current.degree(u))
        }
        added = [
            u
            for u in sorted(marked)
            if not any(w in marked for w in orientation.out_neighbors(u))
        ]
        removed = set(added)
        for u in added:
            removed.update(current.neighbors(u))
        surviving = sum(
            1 for a, b in current.edges() if a not in removed and b not in removed
        )
        fractions.append((current.m - surviving) / current.m)
        chosen.update(added)
        current = induced_subgraph(current, set(current.nodes) - removed)
        iterations += 1
        if iterations > cap:
            raise RetryBudgetExceeded(f"no progress after {iterations} iterations")
    if not verify_mis(g, chosen):
        raise AssertionError("randomized baseline produced an invalid set")
    return LubyResult(frozenset(chosen), iterations, fractions)


def verify_mis(g: Graph, selected: frozenset[int] | set[int]) -> bool:
    """True iff `selected` is independent and dominates every other node."""
    selected = set(selected)
    if not selected.issubset(g.nodes):
        return False
    for u in selected:
        if any(w in selected for w in g.neighbors(u)):
            return False
    for u in g.nodes:
        if u not in selected and not any(w in selected for w in g.neighbors(u)):
            return False
    return True
