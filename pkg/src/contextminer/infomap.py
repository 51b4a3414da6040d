"""Two-level map-equation partitioning of context networks.

The objective is the expected description length, in bits per step, of
a random walk encoded with a two-level codebook:

    L(M) = q * H(Q) + sum_i p_i * H(P_i)

where q is the total module-exit rate, H(Q) the entropy of normalized
exit rates, and H(P_i) the entropy of each module's codebook (its
nodes' visit rates plus its exit rate). Lower codelength means the
partition captures more of the walk's persistence.

Visit rates default to the degree-proportional stationary distribution
on the undirected projection (edgeless graphs fall back to uniform
rates). A directed model is available: PageRank-style rates with
teleportation, where module exits count both link flow and teleport
jumps that land outside the module.

Optimization is greedy: starting from singletons, seed-ordered sweeps
move single nodes, then whole modules, accepting only strict
codelength decreases, until neither pass improves. The better of the
result and the one-module partition is returned, so the final
codelength never exceeds the singleton or one-module baselines.
"""

from __future__ import annotations

import math
import random

from .network import ContextNetwork

_EPS = 1e-12
DEFAULT_TELEPORT = 0.15


def _plogp(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


class RandomWalkModel:
    """Precomputed visit rates and module-exit machinery for one network."""

    def __init__(self, net: ContextNetwork, directed: bool = False, teleport: float = DEFAULT_TELEPORT):
        self.nodes = sorted(net.nodes)
        self.n = len(self.nodes)
        self.directed = directed
        self.teleport = teleport

        # symmetric adjacency of the undirected projection, weights summed
        self.adj: dict[str, dict[str, float]] = {u: {} for u in self.nodes}
        for pair, w in net.undirected_weights().items():
            endpoints = sorted(pair)
            if len(endpoints) != 2:
                continue
            u, v = endpoints
            self.adj[u][v] = self.adj[u].get(v, 0.0) + w
            self.adj[v][u] = self.adj[v].get(u, 0.0) + w

        self.out: dict[str, dict[str, float]] = {u: {} for u in self.nodes}
        for (src, dst), w in net.edges.items():
            if src != dst:
                self.out[src][dst] = self.out[src].get(dst, 0.0) + w
        self.s_out = {u: math.fsum(self.out[u].values()) for u in self.nodes}

        strength = {u: math.fsum(self.adj[u].values()) for u in self.nodes}
        self.total_strength = math.fsum(strength.values())  # equals 2W
        if directed:
            self.p = self._pagerank()
        elif self.total_strength > 0.0:
            self.p = {u: strength[u] / self.total_strength for u in self.nodes}
        else:
            self.p = {u: 1.0 / self.n for u in self.nodes}
        self.node_entropy = -math.fsum(_plogp(x) for x in self.p.values())

    def _pagerank(self, tol: float = 1e-12, max_iter: int = 500) -> dict[str, float]:
        n = self.n
        tau = self.teleport
        p = {u: 1.0 / n for u in self.nodes}
        for _ in range(max_iter):
            nxt = dict.fromkeys(self.nodes, 0.0)
            base = 0.0
            for u in self.nodes:
                if self.s_out[u] > 0.0:
                    base += tau * p[u]
                    share = (1.0 - tau) * p[u] / self.s_out[u]
                    for v, w in self.out[u].items():
                        nxt[v] += share * w
                else:
                    base += p[u]  # dangling: all mass teleports
            for u in self.nodes:
                nxt[u] += base / n
            delta = max(abs(nxt[u] - p[u]) for u in self.nodes)
            p = nxt
            if delta < tol:
                break
        return p

    def module_exit(self, members: set[str]) -> float:
        """Exit rate q_i: probability per step of leaving the module."""
        if self.directed:
            tau = self.teleport
            size = len(members)
            outside_frac = (self.n - size) / self.n
            q = 0.0
            for u in members:
                pu = self.p[u]
                if self.s_out[u] > 0.0:
                    link_out = math.fsum(
                        w for v, w in self.out[u].items() if v not in members
                    ) / self.s_out[u]
                    q += pu * (tau * outside_frac + (1.0 - tau) * link_out)
                else:
                    q += pu * outside_frac
            return q
        if self.total_strength == 0.0:
            return 0.0
        cut = math.fsum(
            math.fsum(w for v, w in self.adj[u].items() if v not in members)
            for u in members
        )
        return cut / self.total_strength

    def module_term(self, members: set[str]) -> tuple[float, float]:
        """(q_i, sum of member visit rates) for one module."""
        return self.module_exit(members), math.fsum(self.p[u] for u in members)

    def partition_codelength(self, modules: list[set[str]]) -> float:
        exits = []
        usages = []
        for members in modules:
            q_i, sp_i = self.module_term(members)
            exits.append(q_i)
            usages.append(q_i + sp_i)
        q_total = math.fsum(exits)
        return (
            _plogp(q_total)
            - 2.0 * math.fsum(_plogp(q) for q in exits)
            + math.fsum(_plogp(u) for u in usages)
            + self.node_entropy
        )


def codelength(
    net: ContextNetwork,
    communities: list[set[str]],
    directed_rates: bool = False,
    teleport: float = DEFAULT_TELEPORT,
) -> float:
    """Map-equation value (bits/step) of a hard partition of ``net``.

    Overlapping or incomplete partitions are rejected: every node must
    appear in exactly one community.
    """
    seen: set[str] = set()
    for members in communities:
        overlap = seen & members
        if overlap:
            raise ValueError(f"partition overlaps on {sorted(overlap)[:3]}")
        seen |= members
    if seen != net.nodes:
        missing = net.nodes - seen
        extra = seen - net.nodes
        raise ValueError(
            f"partition does not cover the network (missing {sorted(missing)[:3]}, "
            f"foreign {sorted(extra)[:3]})"
        )
    model = RandomWalkModel(net, directed=directed_rates, teleport=teleport)
    return model.partition_codelength([set(m) for m in communities])


class _PartitionState:
    """Mutable module assignment with cached per-module terms."""

    def __init__(self, model: RandomWalkModel):
        self.model = model
        self.assign: dict[str, int] = {u: i for i, u in enumerate(model.nodes)}
        self.members: dict[int, set[str]] = {
            i: {u} for i, u in enumerate(model.nodes)
        }
        self.exits: dict[int, float] = {}
        self.usage_p: dict[int, float] = {}
        for mid, mem in self.members.items():
            q, sp = model.module_term(mem)
            self.exits[mid] = q
            self.usage_p[mid] = sp
        self._next_id = len(model.nodes)

    def codelength(self) -> float:
        q_total = math.fsum(self.exits.values())
        return (
            _plogp(q_total)
            - 2.0 * math.fsum(_plogp(q) for q in self.exits.values())
            + math.fsum(
                _plogp(self.exits[mid] + self.usage_p[mid]) for mid in self.members
            )
            + self.model.node_entropy
        )

    def fresh_module_id(self) -> int:
        self._next_id += 1
        return self._next_id - 1

    def delta_move(self, group: set[str], src: int, dst: int | None) -> tuple[float, dict]:
        """Codelength change if ``group`` (subset of module src) moves to dst.

        dst=None means a fresh empty module. Returns the delta and the
        recomputed terms needed to commit the move.
        """
        model = self.model
        src_after = self.members[src] - group
        dst_before = self.members.get(dst, set()) if dst is not None else set()
        dst_after = dst_before | group

        old_terms = [(self.exits[src], self.usage_p[src])]
        if dst is not None:
            old_terms.append((self.exits[dst], self.usage_p[dst]))

        new_terms: dict[int | None, tuple[float, float]] = {}
        if src_after:
            new_terms[src] = model.module_term(src_after)
        new_terms[dst] = model.module_term(dst_after)

        q_total_old = math.fsum(self.exits.values())
        q_total_new = (
            q_total_old
            - math.fsum(q for q, _ in old_terms)
            + math.fsum(q for q, _ in new_terms.values())
        )

        def contribution(q: float, sp: float) -> float:
            return -2.0 * _plogp(q) + _plogp(q + sp)

        delta = _plogp(q_total_new) - _plogp(q_total_old)
        delta -= math.fsum(contribution(q, sp) for q, sp in old_terms)
        delta += math.fsum(contribution(q, sp) for q, sp in new_terms.values())
        return delta, new_terms

    def commit(self, group: set[str], src: int, dst: int | None, new_terms: dict) -> int:
        if dst is None:
            dst = self.fresh_module_id()
            self.members[dst] = set()
            terms = {(src if k == src else dst): v for k, v in new_terms.items()}
        else:
            terms = new_terms
        self.members[src] -= group
        self.members[dst] |= group
        for u in group:
            self.assign[u] = dst
        if not self.members[src]:
            del self.members[src], self.exits[src], self.usage_p[src]
            terms.pop(src, None)
        for mid, (q, sp) in terms.items():
            self.exits[mid] = q
            self.usage_p[mid] = sp
        return dst

    def partition(self) -> list[set[str]]:
        ordered = sorted(self.members.values(), key=lambda m: min(m))
        return [set(m) for m in ordered]


def optimize(
    net: ContextNetwork,
    seed: int = 0,
    directed_rates: bool = False,
    teleport: float = DEFAULT_TELEPORT,
    max_rounds: int = 100,
    trials: int = 8,
    trace: list[list[float]] | None = None,
) -> tuple[list[set[str]], float]:
    """Map-equation minimization over several seeded greedy trials.

    Each trial is an independent greedy descent whose sweep order is
    derived from ``seed``; the partition with the lowest codelength
    wins (ties keep the earlier trial). ``trace``, when given a list,
    receives one sub-list per trial holding the from-scratch codelength
    after every accepted move; within a trial each entry is strictly
    smaller than the one before it.
    """
    if not net.nodes:
        raise ValueError("cannot partition an empty network")
    model = RandomWalkModel(net, directed=directed_rates, teleport=teleport)
    best: tuple[list[set[str]], float] | None = None
    for trial in range(max(1, trials)):
        trial_trace: list[float] | None = [] if trace is not None else None
        partition, length = _descend(
            model, net, seed * 7919 + trial, max_rounds, trial_trace
        )
        if trace is not None:
            trace.append(trial_trace)
        if best is None or length < best[1] - _EPS:
            best = (partition, length)
    return best


def _descend(
    model: RandomWalkModel,
    net: ContextNetwork,
    seed: int,
    max_rounds: int,
    trace: list[float] | None,
) -> tuple[list[set[str]], float]:
    state = _PartitionState(model)
    rng = random.Random(seed)

    def neighbor_modules(group: set[str], current: int) -> list[int]:
        mods = {
            state.assign[v]
            for u in group
            for v in model.adj[u]
            if state.assign[v] != current
        }
        return sorted(mods)

    def try_move(group: set[str], current: int, allow_fresh: bool) -> bool:
        candidates: list[int | None] = list(neighbor_modules(group, current))
        if allow_fresh and len(state.members[current]) > len(group):
            candidates.append(None)
        best_delta = -_EPS
        best: tuple[int | None, dict] | None = None
        for dst in candidates:
            delta, terms = state.delta_move(group, current, dst)
            if delta < best_delta:
                best_delta = delta
                best = (dst, terms)
        if best is None:
            return False
        state.commit(group, current, best[0], best[1])
        if trace is not None:
            trace.append(model.partition_codelength(state.partition()))
        return True

    for _ in range(max_rounds):
        improved = False
        # single-node pass
        while True:
            moved = False
            order = list(model.nodes)
            rng.shuffle(order)
            for u in order:
                if try_move({u}, state.assign[u], allow_fresh=True):
                    moved = improved = True
            if not moved:
                break
        # whole-module pass: lets established modules merge in one step
        for mid in sorted(state.members):
            if mid not in state.members:
                continue
            group = set(state.members[mid])
            if try_move(group, mid, allow_fresh=False):
                improved = True
        if not improved:
            break

    partition = state.partition()
    final = model.partition_codelength(partition)
    if len(partition) > 1:
        one_module = model.partition_codelength([set(net.nodes)])
        if one_module < final - _EPS:
            partition = [set(net.nodes)]
            final = one_module
            if trace is not None:
                trace.append(final)
    return partition, final
