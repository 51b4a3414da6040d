"""Community detection over context networks.

Two detectors share one result type: an ego-network/label-propagation
method that may return overlapping communities (or none at all), and a
map-equation partitioner that assigns every user to at most one module.
Both run on the undirected projection of the interaction network and
drop communities smaller than ``min_size``.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from . import infomap as _infomap
from .network import ContextNetwork, assortativity

DEFAULT_EPSILON = 0.25
DEFAULT_MIN_SIZE = 4
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class CommunityAssignment:
    """Detector output for one context network.

    ``communities`` holds only the retained groups (size >= min_size),
    each a frozenset of user ids, ordered by (-size, members) for the
    overlapping detector and by smallest member for the partitioner.
    ``residual`` is everyone left out.  ``codelength`` is set by the
    map-equation detector only, and is the objective value of the full
    partition before small modules were dissolved.
    """

    context_id: str
    algorithm: str
    communities: tuple[frozenset[str], ...]
    membership: dict[str, frozenset[int]]
    residual: frozenset[str]
    params: dict = field(default_factory=dict)
    codelength: float | None = None

    @property
    def null_communities(self) -> bool:
        return not self.communities

    @property
    def retained_users(self) -> frozenset[str]:
        return frozenset(self.membership)


@dataclass(frozen=True)
class DetectionReport:
    context_id: str
    algorithm: str
    null_communities: bool
    community_count: int
    fraction_users_retained: float
    community_sizes: tuple[int, ...]
    community_assortativity: tuple[float | None, ...]


@dataclass(frozen=True)
class ComparisonSummary:
    """Aggregate of one detector's behaviour over a batch of contexts."""

    algorithm: str
    contexts: int
    null_fraction: float
    mean_communities: float
    mean_fraction_retained: float
    repeat_user_fraction: float


def label_propagation(adjacency: dict[str, set[str]]) -> dict[str, str]:
    """Propagate labels until stable; returns node -> final label.

    Asynchronous sweeps in ascending node order, each node taking the
    most frequent label among its neighbours with ties broken toward
    the lowest label.  Isolated nodes keep their own label.  Bounded
    at 100 sweeps so pathological oscillation cannot hang a run.
    """
    order = sorted(adjacency)
    labels = {node: node for node in order}
    for _ in range(_MAX_SWEEPS):
        changed = False
        for node in order:
            neighbors = adjacency[node]
            if not neighbors:
                continue
            counts: dict[str, int] = {}
            for other in neighbors:
                lab = labels[other]
                counts[lab] = counts.get(lab, 0) + 1
            best = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
            if best != labels[node]:
                labels[node] = best
                changed = True
        if not changed:
            break
    return labels


def _label_groups(labels: dict[str, str]) -> list[set[str]]:
    groups: dict[str, set[str]] = {}
    for node, lab in labels.items():
        groups.setdefault(lab, set()).add(node)
    return list(groups.values())


def _candidate_order(com: frozenset[str]) -> tuple:
    return (-len(com), tuple(sorted(com)))


def _contained(a: frozenset[str], b: frozenset[str], epsilon: float) -> bool:
    # Merge rule: the smaller community must be (1 - epsilon)-contained
    # in the other.  epsilon=0 demands full containment; epsilon=1
    # merges anything (even disjoint pairs, since 0 >= 0).
    return len(a & b) >= (1.0 - epsilon) * min(len(a), len(b))


def _merge_candidates(
    candidates: list[frozenset[str]], epsilon: float
) -> list[frozenset[str]]:
    """Union candidate pairs meeting the containment threshold, to fixpoint.

    The scan order is fixed (largest first, then lexicographic) so the
    result does not depend on discovery order.
    """
    pool = sorted(set(candidates), key=_candidate_order)
    merged = True
    while merged:
        merged = False
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                if _contained(pool[i], pool[j], epsilon):
                    union = pool[i] | pool[j]
                    del pool[j], pool[i]
                    pool.append(union)
                    pool.sort(key=_candidate_order)
                    merged = True
                    break
            if merged:
                break
    return pool


def _assignment(
    context_id: str,
    algorithm: str,
    net: ContextNetwork,
    retained: list[frozenset[str]],
    params: dict,
    codelength: float | None = None,
) -> CommunityAssignment:
    membership: dict[str, set[int]] = {}
    for idx, com in enumerate(retained):
        for user in com:
            membership.setdefault(user, set()).add(idx)
    residual = frozenset(net.nodes - membership.keys())
    return CommunityAssignment(
        context_id=context_id,
        algorithm=algorithm,
        communities=tuple(retained),
        membership={u: frozenset(ix) for u, ix in membership.items()},
        residual=residual,
        params=params,
        codelength=codelength,
    )


def demon(
    net: ContextNetwork,
    epsilon: float = DEFAULT_EPSILON,
    min_size: int = DEFAULT_MIN_SIZE,
) -> CommunityAssignment:
    """Ego-network detector; communities may overlap or be absent.

    For each node v, label propagation runs on v's neighbourhood with
    v removed, and every label group plus v becomes a candidate.
    Candidates merge while one is (1-epsilon)-contained in another,
    then groups below min_size are dropped.  On sparse interaction
    networks the ego neighbourhoods are often edgeless, so an empty
    result (null_communities) is a normal outcome, not an error.
    """
    if net.node_count == 0:
        raise ValueError("cannot detect communities in an empty network")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    adjacency = net.undirected_neighbors()
    candidates: list[frozenset[str]] = []
    for v in sorted(net.nodes):
        ego = adjacency.get(v, set())
        if not ego:
            continue
        sub = {u: (adjacency[u] & ego) - {v} for u in ego}
        for group in _label_groups(label_propagation(sub)):
            candidates.append(frozenset(group | {v}))
    merged = _merge_candidates(candidates, epsilon)
    retained = [com for com in merged if len(com) >= min_size]
    retained.sort(key=_candidate_order)
    params = {"epsilon": epsilon, "min_size": min_size}
    return _assignment(net.context_id, "demon", net, retained, params)


def infomap(
    net: ContextNetwork,
    seed: int = 0,
    min_size: int = DEFAULT_MIN_SIZE,
    directed_rates: bool = False,
    teleport: float = _infomap.DEFAULT_TELEPORT,
) -> CommunityAssignment:
    """Map-equation detector; a hard partition with small modules dissolved.

    Every node lands in at most one community; modules below min_size
    move to the residual rather than being force-merged, since a tiny
    module signals noise, not structure.  The reported codelength is
    the optimizer's objective over the full partition.
    """
    if net.node_count == 0:
        raise ValueError("cannot detect communities in an empty network")
    partition, length = _infomap.optimize(
        net, seed=seed, directed_rates=directed_rates, teleport=teleport
    )
    retained = [frozenset(mod) for mod in partition if len(mod) >= min_size]
    params = {
        "seed": seed,
        "min_size": min_size,
        "directed_rates": directed_rates,
        "teleport": teleport,
    }
    return _assignment(
        net.context_id, "infomap", net, retained, params, codelength=length
    )


def codelength(net: ContextNetwork, partition, **kwargs) -> float:
    """Map-equation value for a hard partition (accepts an assignment)."""
    if isinstance(partition, CommunityAssignment):
        groups = [set(com) for com in partition.communities]
        if partition.residual:
            raise ValueError("assignment has residual users; not a full partition")
    else:
        groups = [set(com) for com in partition]
    return _infomap.codelength(net, groups, **kwargs)


def detection_report(
    net: ContextNetwork, assignment: CommunityAssignment
) -> DetectionReport:
    per_community = tuple(
        assortativity(net.subgraph(set(com))) for com in assignment.communities
    )
    retained = len(assignment.retained_users)
    return DetectionReport(
        context_id=assignment.context_id,
        algorithm=assignment.algorithm,
        null_communities=assignment.null_communities,
        community_count=len(assignment.communities),
        fraction_users_retained=retained / net.node_count,
        community_sizes=tuple(len(com) for com in assignment.communities),
        community_assortativity=per_community,
    )


def compare(assignments: list[CommunityAssignment]) -> ComparisonSummary:
    """Batch summary for one detector across many contexts.

    Mean community count is taken over contexts where detection found
    anything; the null fraction reports the rest.  A repeat user is one
    retained in communities of two or more distinct contexts.
    """
    if not assignments:
        raise ValueError("no assignments to compare")
    algorithms = {a.algorithm for a in assignments}
    if len(algorithms) != 1:
        raise ValueError(f"mixed algorithms in one comparison: {sorted(algorithms)}")
    nulls = sum(1 for a in assignments if a.null_communities)
    non_null = [a for a in assignments if not a.null_communities]
    mean_communities = (
        statistics.fmean(len(a.communities) for a in non_null) if non_null else 0.0
    )
    fractions = []
    for a in assignments:
        total = len(a.retained_users) + len(a.residual)
        fractions.append(len(a.retained_users) / total if total else 0.0)
    seen_in: dict[str, set[str]] = {}
    for a in assignments:
        for user in a.retained_users:
            seen_in.setdefault(user, set()).add(a.context_id)
    repeat = sum(1 for ctxs in seen_in.values() if len(ctxs) >= 2)
    return ComparisonSummary(
        algorithm=algorithms.pop(),
        contexts=len(assignments),
        null_fraction=nulls / len(assignments),
        mean_communities=mean_communities,
        mean_fraction_retained=statistics.fmean(fractions),
        repeat_user_fraction=repeat / len(seen_in) if seen_in else 0.0,
    )


def export_communities(assignment: CommunityAssignment) -> str:
    """One line per retained community: context, algorithm, index, members."""
    lines = [
        "\t".join(
            [
                assignment.context_id,
                assignment.algorithm,
                str(idx),
                ",".join(sorted(com)),
            ]
        )
        for idx, com in enumerate(assignment.communities)
    ]
    return "\n".join(lines) + ("\n" if lines else "")
