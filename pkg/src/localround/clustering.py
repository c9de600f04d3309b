"""Low-diameter graph partitions built from broadcast delays.

Every construction here computes one integer delay per node in
[0, 50*alpha] and then grows clusters by a shortest-arrival rule: node u
joins the cluster of the node v minimizing (delay(v) + d(v, u), id(v)).
That rule alone bounds every cluster's internal radius by 50*alpha.

The constructions differ only in how the shrinking active sets that
define the delays are computed:

  * `mpx_randomized`  - independent subsampling (the randomized baseline);
  * `cluster_constant` - one derandomized shrink per step, guaranteeing a
    0.9 weighted fraction of nodes ends up with low cluster degree;
  * `cluster_all`     - a pipelined grid of derandomized shrinks,
    guaranteeing low cluster degree for every node.

Both deterministic variants delegate each shrink to the grouped hitting
set, pricing active nodes with a normalization that doubles per step, so
the active sets provably empty out after 10*alpha phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush
from typing import Iterable, Mapping

from .errors import ClaimChecker, PreconditionError, RetryBudgetExceeded, leq
from .graphs import Graph, bfs_distances, induced_subgraph, two_hop_sets
from .hitting import BipartiteInstance, grouped_hitting_set
from .ledger import RoundLedger
from .seeds import stream


def base_capacity_exponent(n: int) -> int:
    """Smallest exponent L with 2**L >= n**2 (and at least 2)."""
    return max(2, (max(2, n * n) - 1).bit_length())


def capacity_exponent(n: int, alpha: int) -> int:
    """log2 of the capacity bound N used by all threshold formulas.

    N is the smallest power of two at least n**2, raised further until
    alpha divides log2(N) and N is large enough for the counting
    arguments behind the shrink guarantees (the base-case mass bound and
    the per-step decay need a comfortable gap over n).
    """
    if alpha < 1:
        raise PreconditionError("alpha must be >= 1")
    log_n_cap = alpha * math.ceil(base_capacity_exponent(n) / alpha)
    while True:
        decay_ok = math.exp(-math.ceil(100 * math.log2(log_n_cap)) / 16.0) <= 1.0 / (
            800 * log_n_cap
        )
        mass_ok = 4**log_n_cap >= 50 * log_n_cap * max(1, n)
        if decay_ok and mass_ok:
            return log_n_cap
        log_n_cap += alpha


def cluster_degree_bound_all(log_n_cap: int, alpha: int) -> int:
    """Cluster-degree bound certified by `cluster_all` for every node."""
    return 10 * alpha * (2000 * log_n_cap) ** (log_n_cap // alpha)


def cluster_degree_bound_fraction(log_n_cap: int, alpha: int) -> int:
    """Cluster-degree bound holding for a 0.9 weighted fraction of nodes."""
    return 10 * alpha * math.ceil(1000 * math.log2(log_n_cap)) ** (log_n_cap // alpha)


@dataclass
class Partition:
    """Disjoint clusters covering V, with per-cluster center and delays."""

    alpha: int
    clusters: dict[int, frozenset[int]]
    assignment: dict[int, int]
    delays: dict[int, int]
    meta: dict = field(default_factory=dict, repr=False, compare=False)

    def centers(self) -> tuple[int, ...]:
        return tuple(sorted(self.clusters))

    def cluster_of(self, u: int) -> int:
        return self.assignment[u]

    def restrict(self, keep: Iterable[int]) -> "Partition":
        """Drop all nodes outside `keep`; empty clusters disappear.

        Cluster labels (original centers) are preserved even if the
        center node itself is dropped.
        """
        keep = set(keep)
        clusters = {}
        for c, members in self.clusters.items():
            inside = members & keep
            if inside:
                clusters[c] = frozenset(inside)
        return Partition(
            self.alpha,
            clusters,
            {u: c for u, c in self.assignment.items() if u in keep},
            {u: d for u, d in self.delays.items() if u in keep},
        )

    def to_json_dict(self) -> dict:
        centers = self.centers()
        return {
            "alpha": self.alpha,
            "clusters": [sorted(self.clusters[c]) for c in centers],
            "centers": list(centers),
            "delays": {str(u): self.delays[u] for u in sorted(self.delays)},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Partition":
        clusters = {
            c: frozenset(members)
            for c, members in zip(data["centers"], data["clusters"])
        }
        assignment = {u: c for c, members in clusters.items() for u in members}
        delays = {int(u): int(d) for u, d in data["delays"].items()}
        return cls(int(data["alpha"]), clusters, assignment, delays)


def delays_to_partition(
    g: Graph, delays: Mapping[int, int], alpha: int, ledger: RoundLedger | None = None
) -> Partition:
    """Grow clusters from broadcast delays.

    Node u joins the node v minimizing (delays[v] + d(v, u), id(v)); the
    winning token's whole shortest path lands in the same cluster, so
    clusters are connected with internal radius at most max(delays).
    """
    missing = [u for u in g.nodes if u not in delays]
    if missing:
        raise PreconditionError(f"delays missing for nodes {missing[:5]}")
    heap = [(int(delays[v]), v, v) for v in g.nodes]
    heapify(heap)
    assignment: dict[int, int] = {}
    while heap:
        t, c, u = heappop(heap)
        if u in assignment:
            continue
        assignment[u] = c
        for w in g.neighbors(u):
            if w not in assignment:
                heappush(heap, (t + 1, c, w))
    clusters: dict[int, set[int]] = {}
    for u, c in assignment.items():
        clusters.setdefault(c, set()).add(u)
    for c in clusters:
        # a nonempty cluster's center always claims itself
        if assignment[c] != c:
            raise AssertionError(f"center {c} assigned to {assignment[c]}")
    if ledger is not None:
        ledger.charge("delay-broadcast", 50 * alpha + 2, 50 * alpha + 2)
    return Partition(
        alpha,
        {c: frozenset(members) for c, members in clusters.items()},
        assignment,
        {u: int(delays[u]) for u in g.nodes},
    )


def nearby_active(g: Graph, u: int, active: Iterable[int], alpha: int) -> frozenset[int]:
    """Active nodes within min(d(u, active) + 2, 100*alpha) hops of u."""
    active_set = frozenset(active)
    if u not in g:
        raise KeyError(f"unknown node {u}")
    if not active_set:
        return frozenset()
    cap = 100 * alpha
    if u in active_set:
        dist = 0
    else:
        reach = bfs_distances(g, u)
        dist = min((reach[v] for v in active_set if v in reach), default=None)
        if dist is None:
            return frozenset()
    radius = min(dist + 2, cap)
    return frozenset(
        v for v in bfs_distances(g, u, limit=radius) if v in active_set
    )


def _all_nearby_active(
    g: Graph, active: set[int], alpha: int
) -> tuple[dict[int, frozenset[int]], int]:
    """`nearby_active` for every node at once; also the max radius read."""
    cap = 100 * alpha
    if not active:
        return {u: frozenset() for u in g.nodes}, 0
    if len(active) == g.n and cap >= 2:
        return two_hop_sets(g), 2
    dist = bfs_distances(g, sorted(active))
    out: dict[int, frozenset[int]] = {}
    max_r = 0
    for u in g.nodes:
        d = dist.get(u)
        if d is None:
            out[u] = frozenset()
            continue
        radius = min(d + 2, cap)
        max_r = max(max_r, radius)
        out[u] = frozenset(
            v for v in bfs_distances(g, u, limit=radius) if v in active
        )
    return out, max_r


def _empty_partition(alpha: int) -> Partition:
    return Partition(alpha, {}, {}, {})


def _finish(
    g: Graph,
    alpha: int,
    last_active_index: dict[int, int],
    ledger: RoundLedger | None,
    meta: dict,
) -> Partition:
    delays = {v: 50 * alpha - 5 * last_active_index[v] for v in g.nodes}
    part = delays_to_partition(g, delays, alpha, ledger)
    part.meta.update(meta)
    return part


def mpx_randomized(
    g: Graph,
    alpha: int,
    seed: int,
    ledger: RoundLedger | None = None,
    attempts: int = 5,
) -> Partition:
    """Randomized baseline: keep each active node with rate 2**(-L/alpha).

    Retries with a derived seed if any node survives all 10*alpha phases
    (vanishingly unlikely); fails after `attempts` tries.
    """
    if g.n == 0:
        return _empty_partition(alpha)
    log_n_cap = capacity_exponent(g.n, alpha)
    rate = math.ldexp(1.0, -(log_n_cap // alpha))
    for attempt in range(attempts):
        rng = stream(seed, "mpx", attempt)
        active = set(g.nodes)
        last_index = {v: 0 for v in g.nodes}
        for i in range(10 * alpha):
            active = {v for v in sorted(active) if rng.random() < rate}
            for v in active:
                last_index[v] = i + 1
        if active:
            continue
        if ledger is not None:
            ledger.charge("active-subsample", 0, 10 * alpha)
        part = _finish(g, alpha, last_index, ledger, {"log2_capacity": log_n_cap})
        part.meta["attempt"] = attempt
        return part
    raise RetryBudgetExceeded(
        f"active nodes survived all phases in {attempts} seeded attempts"
    )


def _charge_shrink(
    ledger: RoundLedger | None, label: str, rounds_h: int, alpha: int
) -> int:
    """One shrink simulated on the host graph: 100*alpha rounds per step."""
    if rounds_h <= 0:
        return 0
    rounds = rounds_h * 100 * alpha
    if ledger is not None:
        ledger.charge(label, min(100 * alpha, rounds), rounds)
    return rounds


def cluster_constant(
    g: Graph,
    alpha: int,
    weights: Mapping[int, float],
    ledger: RoundLedger | None = None,
) -> Partition:
    """Partition with diameter <= 100*alpha where, weighted by `weights`,
    at least a 0.9 fraction of nodes sees few neighboring clusters.

    Weights must lie in [1/n, 1].  The shrink for step j keeps active
    nodes so that few weighted nodes drop below the next occupancy
    threshold, at price norm(i, j) per kept node; the price doubles each
    step, which forces the final active set empty.
    """
    if g.n == 0:
        return _empty_partition(alpha)
    n = g.n
    for u in g.nodes:
        w = weights[u]
        if not (1.0 / n - 1e-12 <= w <= 1.0 + 1e-12):
            raise PreconditionError(f"weight {w} at node {u} outside [1/n, 1]")
    log_n_cap = capacity_exponent(n, alpha)
    steps = log_n_cap // alpha
    occupancy_factor = math.ceil(1000 * math.log2(log_n_cap))
    group_size = math.ceil(100 * math.log2(log_n_cap))
    rate = 1.0 / 16.0
    thresholds = [occupancy_factor ** (steps - j) for j in range(steps + 1)]
    total_w = sum(weights[u] for u in g.nodes)
    checks = ClaimChecker()
    checks.ok(
        "shrink-decay",
        math.exp(-rate * group_size) <= 1.0 / (800 * log_n_cap),
        "capacity exponent too small for the shrink analysis",
    )

    def claim_mass(i: int, j: int, size: int) -> None:
        checks.ok(
            "active-mass",
            leq(size * 50 * log_n_cap * float(2 ** (i * steps + j)),
                total_w * math.ldexp(1.0, 2 * log_n_cap)),
            f"active set too large at phase {i} step {j}: {size}",
        )

    active = set(g.nodes)
    last_index = {v: 0 for v in g.nodes}
    actives = [frozenset(active)]
    for i in range(10 * alpha):
        s_map, scan_r = _all_nearby_active(g, active, alpha)
        if ledger is not None and scan_r > 0:
            ledger.charge("active-scan", scan_r, scan_r)
        current = set(active)
        for j in range(steps):
            claim_mass(i, j, len(current))
            u_side = [
                u for u in g.nodes if len(s_map[u] & current) >= thresholds[j]
            ]
            if u_side:
                norm = math.ldexp(1.0, i * steps + j - 2 * log_n_cap)
                adj = {
                    u: tuple(sorted(s_map[u] & current))[: thresholds[j]]
                    for u in u_side
                }
                inst = BipartiteInstance(
                    tuple(u_side),
                    tuple(sorted(current)),
                    adj,
                    {u: float(weights[u]) for u in u_side},
                    thresholds[j],
                    rate,
                    norm,
                    group_size,
                )
                res = grouped_hitting_set(inst)
                checks.merge(res.checks)
                _charge_shrink(ledger, "active-shrink", res.rounds_h, alpha)
                nxt = set(res.selected)
            else:
                nxt = set()
            dropped = [u for u in u_side if len(s_map[u] & nxt) < thresholds[j + 1]]
            dropped_mass = sum(weights[u] for u in dropped)
            checks.ok(
                "shrink-bad-mass",
                leq(dropped_mass, total_w / (100 * log_n_cap), total_w + 1.0),
                f"phase {i} step {j}: dropped weight {dropped_mass}",
            )
            current = nxt
        claim_mass(i, steps, len(current))
        active = current
        for v in active:
            last_index[v] = i + 1
        actives.append(frozenset(active))
    checks.ok("no-active-at-end", not active, f"{len(active)} nodes still active")

    meta = {
        "log2_capacity": log_n_cap,
        "alpha": alpha,
        "steps_per_phase": steps,
        "actives": actives,
        "claims": checks.counts,
        "degree_bound": cluster_degree_bound_fraction(log_n_cap, alpha),
    }
    return _finish(g, alpha, last_index, ledger, meta)


def cluster_all(
    g: Graph, alpha: int, ledger: RoundLedger | None = None
) -> Partition:
    """Partition with diameter <= 100*alpha where every node sees few
    neighboring clusters.

    Phase i shrinks the active set through `steps` occupancy levels, but
    level j starts before level j-1 stabilizes: cell (j, l) combines the
    previous cell at the same level with one hitting-set call targeting
    nodes that were fine at level j-1 but still lag at level j.  Cell
    counts provably decay geometrically in l, so 4*log2(N) sweeps finish
    every level.
    """
    if g.n == 0:
        return _empty_partition(alpha)
    n = g.n
    log_n_cap = capacity_exponent(n, alpha)
    steps = log_n_cap // alpha
    sweeps = 4 * log_n_cap
    occupancy_factor = 2000 * log_n_cap
    thresholds = [occupancy_factor ** (steps - j) for j in range(steps + 1)]
    group_size = 500 * log_n_cap
    rate = 1.0 / (64 * log_n_cap)
    checks = ClaimChecker()
    checks.ok(
        "pipeline-decay",
        math.exp(-rate * group_size) <= 1.0 / 32.0,
        "pipeline shrink decay too weak",
    )

    active = set(g.nodes)
    last_index = {v: 0 for v in g.nodes}
    actives = [frozenset(active)]
    for i in range(10 * alpha):
        s_map, scan_r = _all_nearby_active(g, active, alpha)
        if ledger is not None and scan_r > 0:
            ledger.charge("active-scan", scan_r, scan_r)
        important = [u for u in g.nodes if len(s_map[u]) >= thresholds[0]]
        checks.ok(
            "pipeline-active-mass",
            len(active) * 2 ** (i * steps) <= 2 * log_n_cap * n,
            f"phase {i}: level-0 active set too large",
        )
        wave_rounds: dict[int, int] = {}
        prev_row: list[set[int]] = [set(active) for _ in range(sweeps + 1)]
        for j in range(1, steps + 1):
            row: list[set[int]] = [set()]
            checks.ok(
                "pipeline-bad-count",
                len(important) * 2**0 <= n * 2**j,
                f"phase {i} level {j} sweep 0",
            )
            for ell in range(1, sweeps + 1):
                lagging = [
                    u
                    for u in important
                    if len(s_map[u] & prev_row[ell]) >= thresholds[j - 1]
                    and len(s_map[u] & row[ell - 1]) < thresholds[j]
                ]
                if lagging:
                    norm = math.ldexp(1.0, i * steps + j + (j - ell))
                    adj = {
                        u: tuple(sorted(s_map[u] & prev_row[ell]))[: thresholds[j - 1]]
                        for u in lagging
                    }
                    inst = BipartiteInstance(
                        tuple(lagging),
                        tuple(sorted(prev_row[ell])),
                        adj,
                        {u: 1.0 for u in lagging},
                        thresholds[j - 1],
                        rate,
                        norm,
                        group_size,
                    )
                    res = grouped_hitting_set(inst)
                    checks.merge(res.checks)
                    cell_rounds = res.rounds_h * 100 * alpha
                    wave = j + ell
                    wave_rounds[wave] = max(wave_rounds.get(wave, 0), cell_rounds)
                    selected = set(res.selected)
                else:
                    selected = set()
                cell = row[ell - 1] | selected
                row.append(cell)
                still_lagging = sum(
                    1 for u in important if len(s_map[u] & cell) < thresholds[j]
                )
                checks.ok(
                    "pipeline-bad-count",
                    still_lagging * 2**ell <= n * 2**j,
                    f"phase {i} level {j} sweep {ell}: {still_lagging} lagging",
                )
            checks.ok(
                "pipeline-active-mass",
                len(row[sweeps]) * 2 ** (i * steps + j) <= 2 * log_n_cap * n,
                f"phase {i} level {j}: active set too large",
            )
            prev_row = row
        for rounds in (wave_rounds[t] for t in sorted(wave_rounds)):
            if ledger is not None and rounds > 0:
                ledger.charge("pipeline-shrink", min(100 * alpha, rounds), rounds)
        active = set(prev_row[sweeps]) if steps >= 1 else set()
        for v in active:
            last_index[v] = i + 1
        actives.append(frozenset(active))
    checks.ok("no-active-at-end", not active, f"{len(active)} nodes still active")

    meta = {
        "log2_capacity": log_n_cap,
        "alpha": alpha,
        "steps_per_phase": steps,
        "actives": actives,
        "claims": checks.counts,
        "degree_bound": cluster_degree_bound_all(log_n_cap, alpha),
    }
    return _finish(g, alpha, last_index, ledger, meta)


def cluster_degree(g: Graph, partition: Partition, u: int) -> int:
    """Number of clusters at hop distance <= 1 from u."""
    seen = {partition.assignment[u]}
    for v in g.neighbors(u):
        seen.add(partition.assignment[v])
    return len(seen)


def verify_partition(
    g: Graph,
    partition: Partition,
    alpha: int,
    degree_bound: float | None = None,
) -> dict:
    """Measure strong diameters and cluster degrees; flag violations.

    Raises if `partition` is not a partition of V(g).  Strong diameter is
    measured inside each cluster's induced subgraph, so a disconnected
    cluster reports an infinite diameter and fails the check.
    """
    covered: set[int] = set()
    for c, members in partition.clusters.items():
        if not members:
            raise PreconditionError(f"empty cluster {c}")
        if covered & members:
            raise PreconditionError("clusters overlap")
        covered |= members
    if covered != set(g.nodes):
        raise PreconditionError("clusters do not cover V")
    for u, c in partition.assignment.items():
        if u not in partition.clusters[c]:
            raise PreconditionError(f"assignment inconsistent at node {u}")

    max_diameter = 0.0
    for c in sorted(partition.clusters):
        members = partition.clusters[c]
        sub = induced_subgraph(g, members)
        for u in members:
            dist = bfs_distances(sub, u)
            if len(dist) < len(members):
                max_diameter = math.inf
                break
            max_diameter = max(max_diameter, max(dist.values()))
        if max_diameter == math.inf:
            break

    histogram: dict[int, int] = {}
    max_degree = 0
    for u in g.nodes:
        d = cluster_degree(g, partition, u)
        histogram[d] = histogram.get(d, 0) + 1
        max_degree = max(max_degree, d)

    ok = max_diameter <= 100 * alpha and (
        degree_bound is None or max_degree <= degree_bound
    )
    return {
        "ok": bool(ok),
        "max_diameter": max_diameter,
        "max_cluster_degree": max_degree,
        "degree_histogram": histogram,
        "num_clusters": len(partition.clusters),
    }
