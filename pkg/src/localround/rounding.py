"""Pairwise objectives over labelings and deterministic local rounding.

An objective is a sum of per-node terms and per-conflict-edge terms, each
depending only on the labels of its own node(s).  For a fractional
(probabilistic) labeling the objective is its expectation under per-node
independent label draws; since every term touches at most two nodes, only
single marginals and pairwise products ever appear.

`round_labels` converts a fractional labeling into an integral one whose
utility-minus-cost never drops below the fractional value: it walks the
color classes of a proper coloring of the conflict graph in increasing
order and fixes each node to the label maximizing the conditional
expectation of the terms it participates in.  Nodes sharing a color class
share no term, so their choices are order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ClaimChecker, PreconditionError, REL_TOL, geq
from .graphs import Graph
from .ledger import RoundLedger

Row = tuple[float, ...]
Matrix = tuple[Row, ...]


@dataclass(frozen=True)
class Coloring:
    """Color index per node; proper on the intended conflict graph."""

    colors: Mapping[int, int]
    num_colors: int


class FractionalAssignment:
    """Per-node probability vectors over a common finite label alphabet."""

    __slots__ = ("probs", "lambda_min")

    def __init__(self, probs: Mapping[int, Sequence[float]]):
        clean: dict[int, tuple[float, ...]] = {}
        lam_min = 1.0
        for node, vec in probs.items():
            vec = tuple(float(x) for x in vec)
            if not vec:
                raise PreconditionError(f"empty probability vector at node {node}")
            if any(x < -1e-12 or x > 1.0 + 1e-12 for x in vec):
                raise PreconditionError(f"probabilities outside [0,1] at node {node}")
            if abs(sum(vec) - 1.0) > 1e-9:
                raise PreconditionError(f"probabilities at node {node} sum to {sum(vec)!r}")
            clean[node] = vec
            for x in vec:
                if x > 0.0:
                    lam_min = min(lam_min, x)
        self.probs = clean
        # smallest nonzero entry over all nodes and labels
        self.lambda_min = lam_min

    def __getitem__(self, node: int) -> tuple[float, ...]:
        return self.probs[node]

    def __contains__(self, node: int) -> bool:
        return node in self.probs

    def nodes(self):
        return self.probs.keys()


class UtilityCostInstance:
    """Conflict graph plus utility/cost tables for nodes and edges.

    node_terms maps node -> (utility_row, cost_row), one value per label;
    edge_terms maps a canonical (u, v) edge (u < v) to a pair of matrices
    indexed [label_u][label_v].  Either member of a pair may be None for
    an all-zero table.  Constant offsets hold label-independent mass.
    """

    __slots__ = (
        "conflict_graph",
        "num_labels",
        "node_terms",
        "edge_terms",
        "utility_const",
        "cost_const",
    )

    def __init__(
        self,
        conflict_graph: Graph,
        num_labels: int,
        node_terms: Mapping[int, tuple[Row | None, Row | None]] | None = None,
        edge_terms: Mapping[tuple[int, int], tuple[Matrix | None, Matrix | None]] | None = None,
        utility_const: float = 0.0,
        cost_const: float = 0.0,
    ):
        if num_labels < 1:
            raise PreconditionError("need at least one label")
        self.conflict_graph = conflict_graph
        self.num_labels = num_labels
        self.node_terms = dict(node_terms or {})
        self.edge_terms = dict(edge_terms or {})
        self.utility_const = float(utility_const)
        self.cost_const = float(cost_const)
        for node, (urow, crow) in self.node_terms.items():
            if node not in conflict_graph:
                raise PreconditionError(f"term on unknown node {node}")
            for row in (urow, crow):
                if row is None:
                    continue
                if len(row) != num_labels or not all(math.isfinite(x) for x in row):
                    raise PreconditionError(f"bad node table at {node}")
        for (u, v), (umat, cmat) in self.edge_terms.items():
            if not (u < v and conflict_graph.has_edge(u, v)):
                raise PreconditionError(f"edge term ({u},{v}) is not a conflict edge")
            for mat in (umat, cmat):
                if mat is None:
                    continue
                if len(mat) != num_labels or any(
                    len(r) != num_labels or not all(math.isfinite(x) for x in r)
                    for r in mat
                ):
                    raise PreconditionError(f"bad edge table at ({u},{v})")

    def decision_nodes(self) -> tuple[int, ...]:
        return self.conflict_graph.nodes


def _node_value(row: Row | None, probs: Sequence[float]) -> float:
    if row is None:
        return 0.0
    return sum(p * x for p, x in zip(probs, row) if p != 0.0)


def _edge_value(mat: Matrix | None, pu: Sequence[float], pv: Sequence[float]) -> float:
    if mat is None:
        return 0.0
    total = 0.0
    for a, pa in enumerate(pu):
        if pa == 0.0:
            continue
        row = mat[a]
        total += pa * sum(pb * x for pb, x in zip(pv, row) if pb != 0.0)
    return total


def _one_hot(num_labels: int, label: int) -> tuple[float, ...]:
    return tuple(1.0 if i == label else 0.0 for i in range(num_labels))


def evaluate(
    inst: UtilityCostInstance,
    assignment: FractionalAssignment | Mapping[int, int],
) -> tuple[float, float]:
    """(utility, cost) of a fractional or integral labeling.

    Integral labelings are plain node -> label index mappings; they are
    evaluated as the degenerate one-hot distribution.
    """
    if isinstance(assignment, FractionalAssignment):
        probs = assignment.probs
    else:
        probs = {v: _one_hot(inst.num_labels, lab) for v, lab in assignment.items()}
    for v in inst.conflict_graph.nodes:
        if v not in probs:
            raise PreconditionError(f"assignment misses decision node {v}")
    utility = inst.utility_const
    cost = inst.cost_const
    for node, (urow, crow) in inst.node_terms.items():
        p = probs[node]
        utility += _node_value(urow, p)
        cost += _node_value(crow, p)
    for (u, v), (umat, cmat) in inst.edge_terms.items():
        pu, pv = probs[u], probs[v]
        utility += _edge_value(umat, pu, pv)
        cost += _edge_value(cmat, pu, pv)
    return utility, cost


def greedy_color(g: Graph) -> Coloring:
    """First-fit coloring in increasing node id; at most max_degree+1 colors."""
    colors: dict[int, int] = {}
    for u in g.nodes:
        taken = {colors[v] for v in g.neighbors(u) if v in colors}
        c = 0
        while c in taken:
            c += 1
        colors[u] = c
    return Coloring(colors, max(colors.values()) + 1 if colors else 0)


def is_proper(g: Graph, coloring: Coloring) -> bool:
    return all(coloring.colors[u] != coloring.colors[v] for u, v in g.edges())


def round_labels(
    inst: UtilityCostInstance,
    lam: FractionalAssignment,
    coloring: Coloring,
    ledger: RoundLedger | None = None,
    charge_label: str = "local-rounding",
    hop_scale: int = 2,
    checks: ClaimChecker | None = None,
) -> dict[int, int]:
    """Round a fractional labeling to an integral one, never losing value.

    Requires utility(lam) - cost(lam) >= 0.1 * utility(lam) and a coloring
    proper on the conflict graph.  The output satisfies both the 0.9
    contract and the stronger no-loss bound
    utility(l) - cost(l) >= utility(lam) - cost(lam),
    because fixing a node to its best conditional label can only increase
    the conditional expectation of the objective.
    """
    checks = checks if checks is not None else ClaimChecker()
    g = inst.conflict_graph
    u0, c0 = evaluate(inst, lam)
    gain0 = u0 - c0
    scale = abs(u0) + abs(c0) + 1.0
    if gain0 < 0.1 * u0 - REL_TOL * scale:
        raise PreconditionError(
            f"rounding needs utility-cost >= 0.1*utility; measured "
            f"utility={u0!r} cost={c0!r}"
        )
    if not is_proper(g, coloring):
        raise PreconditionError("coloring is not proper on the conflict graph")

    probs: dict[int, list[float]] = {v: list(lam[v]) for v in g.nodes}
    # gather each node's incident terms once
    incident: dict[int, list[tuple[int, bool, Matrix | None, Matrix | None]]] = {
        v: [] for v in g.nodes
    }
    for (u, v), (umat, cmat) in inst.edge_terms.items():
        incident[u].append((v, True, umat, cmat))
        incident[v].append((u, False, umat, cmat))

    by_class: list[list[int]] = [[] for _ in range(coloring.num_colors)]
    for v in g.nodes:
        by_class[coloring.colors[v]].append(v)

    tracked = gain0
    labels: dict[int, int] = {}
    nl = inst.num_labels
    for members in by_class:
        before = tracked
        for v in members:
            scores = [0.0] * nl
            urow, crow = inst.node_terms.get(v, (None, None))
            if urow is not None:
                for a in range(nl):
                    scores[a] += urow[a]
            if crow is not None:
                for a in range(nl):
                    scores[a] -= crow[a]
            for w, v_is_first, umat, cmat in incident[v]:
                pw = probs[w]
                for a in range(nl):
                    acc = 0.0
                    if umat is not None:
                        if v_is_first:
                            acc += sum(p * x for p, x in zip(pw, umat[a]) if p != 0.0)
                        else:
                            acc += sum(
                                pw[b] * umat[b][a] for b in range(nl) if pw[b] != 0.0
                            )
                    if cmat is not None:
                        if v_is_first:
                            acc -= sum(p * x for p, x in zip(pw, cmat[a]) if p != 0.0)
                        else:
                            acc -= sum(
                                pw[b] * cmat[b][a] for b in range(nl) if pw[b] != 0.0
                            )
                    scores[a] += acc
            pv = probs[v]
            mixed = sum(p * s for p, s in zip(pv, scores) if p != 0.0)
            best = max(range(nl), key=lambda a: (scores[a], -a))
            labels[v] = best
            probs[v] = list(_one_hot(nl, best))
            tracked += scores[best] - mixed
        checks.ok(
            "rounding-monotone",
            geq(tracked, before, scale),
            f"objective dropped {before!r} -> {tracked!r} within a color class",
        )

    uf, cf = evaluate(inst, labels)
    checks.ok(
        "rounding-consistency",
        abs((uf - cf) - tracked) <= 1e-6 * scale,
        f"tracked objective {tracked!r} != evaluated {(uf - cf)!r}",
    )
    checks.ok(
        "rounding-contract",
        geq(uf - cf, 0.9 * gain0, scale),
        f"rounded objective {(uf - cf)!r} < 0.9 * fractional {gain0!r}",
    )
    checks.ok(
        "rounding-no-loss",
        geq(uf - cf, gain0, scale),
        f"rounded objective {(uf - cf)!r} < fractional {gain0!r}",
    )
    if ledger is not None and coloring.num_colors > 0:
        ledger.charge(charge_label, hop_scale, hop_scale * coloring.num_colors)
    return labels
