"""Directed weighted user-user interaction networks and their statistics.

Edges follow retweet and mention relations inside one context's post
set. Direction runs from the original/mentioning author to the
retweeter/mentioned user; ``reverse_edges`` flips that reading for
experiments where in-degree should mean attention received.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contexts import PostSet


@dataclass
class ContextNetwork:
    """Directed graph: nodes are user ids, edge weights are pair counts."""

    context_id: str
    nodes: set[str]
    edges: dict[tuple[str, str], int]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def in_degree(self, user: str) -> int:
        return sum(1 for (_, dst) in self.edges if dst == user)

    def successors(self, user: str) -> set[str]:
        return {dst for (src, dst) in self.edges if src == user}

    def undirected_neighbors(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {u: set() for u in self.nodes}
        for src, dst in self.edges:
            adj[src].add(dst)
            adj[dst].add(src)
        return adj

    def undirected_weights(self) -> dict[frozenset, int]:
        """Collapse edge directions, summing weights per unordered pair."""
        weights: dict[frozenset, int] = {}
        for (src, dst), w in self.edges.items():
            key = frozenset((src, dst))
            weights[key] = weights.get(key, 0) + w
        return weights

    def subgraph(self, members: set[str]) -> "ContextNetwork":
        return ContextNetwork(
            context_id=self.context_id,
            nodes=set(members) & self.nodes,
            edges={
                (s, d): w for (s, d), w in self.edges.items()
                if s in members and d in members
            },
        )


@dataclass
class NetworkStats:
    node_count: int
    edge_count: int
    density: float
    avg_degree: float
    assortativity: float | None
    assortativity_defined: bool
    scc_ratio: float

    def to_record(self) -> dict:
        return {
            "nodes": self.node_count,
            "edges": self.edge_count,
            "density": self.density,
            "avg_degree": self.avg_degree,
            "assortativity": self.assortativity,
            "assortativity_defined": self.assortativity_defined,
            "scc_ratio": self.scc_ratio,
        }


def build(posts: PostSet, reverse_edges: bool = False) -> ContextNetwork:
    """Induce the context network from an on-context post set.

    Retweets add original-author -> retweeter edges; the original author
    joins the node set even when only the retweet record proves their
    authorship. Mentions add author -> mentioned edges only for users
    who authored something in the set. Self-interactions never add
    edges.
    """
    authors = {p.author_id for p in posts.posts}
    nodes = set(authors)
    edges: dict[tuple[str, str], int] = {}

    def add_edge(src: str, dst: str) -> None:
        if src == dst:
            return
        key = (dst, src) if reverse_edges else (src, dst)
        edges[key] = edges.get(key, 0) + 1

    for post in posts.posts:
        if post.is_retweet and post.original_author is not None:
            # The retweet record itself proves the original author's
            # activity, so they join the node set even when the original
            # post is outside the set.
            if post.original_author != post.author_id:
                nodes.add(post.original_author)
            add_edge(post.original_author, post.author_id)
        for mentioned in sorted(post.mentions):
            if mentioned in authors:
                add_edge(post.author_id, mentioned)

    return ContextNetwork(context_id=posts.context_id, nodes=nodes, edges=edges)


def _pearson(xs: list[float], ys: list[float]) -> float | None:
    n = len(xs)
    if n == 0:
        return None
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = math.fsum((x - mx) ** 2 for x in xs)
    vy = math.fsum((y - my) ** 2 for y in ys)
    if vx == 0.0 or vy == 0.0:
        return None
    return cov / math.sqrt(vx * vy)


def assortativity(net: ContextNetwork) -> float | None:
    """Pearson correlation of total degrees across undirected edges.

    Each undirected edge contributes both orientations, so the
    correlation is symmetric. Zero degree variance (e.g. a clique or a
    perfect matching) leaves the coefficient undefined.
    """
    adj = net.undirected_neighbors()
    degree = {u: len(vs) for u, vs in adj.items()}
    xs: list[float] = []
    ys: list[float] = []
    for pair in net.undirected_weights():
        endpoints = sorted(pair)
        if len(endpoints) != 2:
            continue
        u, v = endpoints
        xs.extend((degree[u], degree[v]))
        ys.extend((degree[v], degree[u]))
    return _pearson(xs, ys)


def strongly_connected_components(net: ContextNetwork) -> list[set[str]]:
    """Tarjan's algorithm, iterative to keep deep paths off the C stack."""
    succ: dict[str, list[str]] = {u: [] for u in net.nodes}
    for (src, dst) in net.edges:
        succ[src].append(dst)
    for u in succ:
        succ[u].sort()

    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[set[str]] = []
    counter = 0

    for root in sorted(net.nodes):
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, child_idx = work.pop()
            if child_idx == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            children = succ[node]
            for i in range(child_idx, len(children)):
                child = children[i]
                if child not in index:
                    work.append((node, i + 1))
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index[child])
            if advanced:
                continue
            if lowlink[node] == index[node]:
                component: set[str] = set()
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.add(member)
                    if member == node:
                        break
                components.append(component)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return components


def stats(net: ContextNetwork) -> NetworkStats:
    """Node/edge counts plus density, mean degree, assortativity, SCC ratio."""
    n = net.node_count
    if n < 1:
        raise ValueError("stats requires at least one node")
    m = net.edge_count
    density = m / (n * (n - 1)) if n >= 2 else 0.0
    avg_degree = 2 * m / n
    assort = assortativity(net)
    scc_ratio = len(strongly_connected_components(net)) / n
    return NetworkStats(
        node_count=n,
        edge_count=m,
        density=density,
        avg_degree=avg_degree,
        assortativity=assort,
        assortativity_defined=assort is not None,
        scc_ratio=scc_ratio,
    )


def export_edge_list(net: ContextNetwork) -> str:
    """Tab-separated ``src<TAB>dst<TAB>weight`` lines in sorted order."""
    lines = [
        f"{src}\t{dst}\t{w}"
        for (src, dst), w in sorted(net.edges.items())
    ]
    return "\n".join(lines) + ("\n" if lines else "")
