"""Overlapping and partition-based community detection."""

import pytest

from contextminer import ContextNetwork, compare, demon, detection_report
from contextminer.communities import (
    ComparisonSummary,
    CommunityAssignment,
    export_communities,
    infomap,
    label_propagation,
)


def clique_edges(members):
    members = sorted(members)
    return {
        (members[i], members[j]): 1
        for i in range(len(members))
        for j in range(i + 1, len(members))
    }


def shared_node_net():
    """Two 4-cliques glued at node s."""
    edges = clique_edges(["s", "a1", "a2", "a3"])
    edges.update(clique_edges(["s", "b1", "b2", "b3"]))
    nodes = {"s", "a1", "a2", "a3", "b1", "b2", "b3"}
    return ContextNetwork(context_id="glued", nodes=nodes, edges=edges)


def star_net(leaves=5):
    nodes = {"hub"} | {f"l{i}" for i in range(leaves)}
    edges = {("hub", f"l{i}"): 1 for i in range(leaves)}
    return ContextNetwork(context_id="star", nodes=nodes, edges=edges)


def test_shared_node_lands_in_both_communities():
    assignment = demon(shared_node_net(), min_size=4)
    got = {frozenset(c) for c in assignment.communities}
    assert got == {
        frozenset({"s", "a1", "a2", "a3"}),
        frozenset({"s", "b1", "b2", "b3"}),
    }
    assert assignment.membership["s"] == frozenset({0, 1})
    assert assignment.membership["a1"] != assignment.membership["b1"]
    assert assignment.residual == frozenset()
    assert not assignment.null_communities


def test_every_retained_community_meets_min_size():
    for min_size in (2, 3, 4, 5):
        assignment = demon(shared_node_net(), min_size=min_size)
        assert all(len(c) >= min_size for c in assignment.communities), min_size


def test_star_yields_null_communities():
    assignment = demon(star_net(), min_size=4)
    assert assignment.null_communities
    assert assignment.communities == ()
    assert assignment.retained_users == frozenset()
    assert assignment.residual == star_net().nodes


def test_epsilon_loosens_merging():
    # hub-leaf pairs share only the hub; epsilon=0.5 lets them chain-merge
    strict = demon(star_net(), epsilon=0.25, min_size=4)
    loose = demon(star_net(), epsilon=0.5, min_size=4)
    assert strict.null_communities
    assert not loose.null_communities
    assert loose.communities == (frozenset(star_net().nodes),)


def test_epsilon_validation():
    with pytest.raises(ValueError):
        demon(star_net(), epsilon=-0.1)
    with pytest.raises(ValueError):
        demon(star_net(), epsilon=1.5)


def test_empty_network_rejected():
    empty = ContextNetwork(context_id="void", nodes=set(), edges={})
    with pytest.raises(ValueError):
        demon(empty)
    with pytest.raises(ValueError):
        infomap(empty)


def test_edgeless_network_is_null():
    net = ContextNetwork(context_id="dust", nodes={"a", "b", "c"}, edges={})
    assignment = demon(net)
    assert assignment.null_communities
    assert assignment.residual == {"a", "b", "c"}


def test_demon_is_deterministic():
    runs = [demon(shared_node_net(), min_size=2) for _ in range(3)]
    assert runs[0].communities == runs[1].communities == runs[2].communities
    assert runs[0].membership == runs[1].membership


def test_label_propagation_two_cliques():
    edges = clique_edges(["a1", "a2", "a3"])
    edges.update(clique_edges(["b1", "b2", "b3"]))
    adjacency = {u: set() for c in (["a1", "a2", "a3"], ["b1", "b2", "b3"]) for u in c}
    for (u, v) in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    labels = label_propagation(adjacency)
    assert len({labels[u] for u in ("a1", "a2", "a3")}) == 1
    assert len({labels[u] for u in ("b1", "b2", "b3")}) == 1
    assert labels["a1"] != labels["b1"]


def test_infomap_detector_partitions_and_dissolves():
    edges = clique_edges(["a1", "a2", "a3", "a4"])
    edges.update(clique_edges(["b1", "b2", "b3", "b4"]))
    edges[("a1", "b1")] = 1
    edges[("a1", "x")] = 1  # pendant node ends up in a small module or absorbed
    nodes = {f"a{i}" for i in range(1, 5)} | {f"b{i}" for i in range(1, 5)} | {"x"}
    net = ContextNetwork(context_id="duo", nodes=nodes, edges=edges)
    assignment = infomap(net, seed=3, min_size=4)
    assert assignment.algorithm == "infomap"
    assert assignment.codelength is not None
    # hard partition: nobody belongs to two communities
    for indices in assignment.membership.values():
        assert len(indices) == 1
    assert all(len(c) >= 4 for c in assignment.communities)
    covered = set().union(*assignment.communities) if assignment.communities else set()
    assert covered | assignment.residual == nodes


def test_detection_report_shape():
    net = shared_node_net()
    assignment = demon(net, min_size=4)
    report = detection_report(net, assignment)
    assert report.community_count == 2
    assert report.community_sizes == (4, 4)
    assert report.fraction_users_retained == 1.0
    assert len(report.community_assortativity) == 2
    assert not report.null_communities


def test_detection_report_null():
    net = star_net()
    report = detection_report(net, demon(net, min_size=4))
    assert report.null_communities
    assert report.community_count == 0
    assert report.fraction_users_retained == 0.0
    assert report.community_sizes == ()


def make_assignment(cid, groups, extra_nodes=()):
    nodes = set(extra_nodes) | {u for g in groups for u in g}
    edges = {}
    for g in groups:
        edges.update(clique_edges(sorted(g)))
    net = ContextNetwork(context_id=cid, nodes=nodes, edges=edges)
    membership = {}
    for idx, g in enumerate(groups):
        for u in g:
            membership.setdefault(u, set()).add(idx)
    return CommunityAssignment(
        context_id=cid,
        algorithm="demon",
        communities=tuple(frozenset(g) for g in groups),
        membership={u: frozenset(ix) for u, ix in membership.items()},
        residual=frozenset(nodes - membership.keys()),
        params={},
    )


def test_compare_aggregates_by_hand():
    a = make_assignment("c1", [{"u1", "u2", "u3", "u4"}], extra_nodes={"u9"})
    b = make_assignment("c2", [{"u1", "u5", "u6", "u7"}, {"v1", "v2", "v3", "v4"}])
    c = make_assignment("c3", [], extra_nodes={"w1", "w2"})
    d = make_assignment("c4", [], extra_nodes={"w3"})
    summary = compare([a, b, c, d])
    assert summary == ComparisonSummary(
        algorithm="demon",
        contexts=4,
        null_fraction=0.5,
        mean_communities=1.5,          # over the two non-null contexts
        mean_fraction_retained=(4 / 5 + 1.0 + 0.0 + 0.0) / 4,
        repeat_user_fraction=1 / 11,   # u1 alone is retained in two contexts
    )


def test_compare_rejects_bad_input():
    a = make_assignment("c1", [{"u1", "u2", "u3", "u4"}])
    with pytest.raises(ValueError):
        compare([])
    mixed = CommunityAssignment(
        context_id="c2", algorithm="infomap", communities=(),
        membership={}, residual=frozenset(), params={},
    )
    with pytest.raises(ValueError):
        compare([a, mixed])


def test_export_communities_format():
    assignment = demon(shared_node_net(), min_size=4)
    text = export_communities(assignment)
    lines = text.splitlines()
    assert len(lines) == 2
    context_id, algorithm, idx, members = lines[0].split("\t")
    assert (context_id, algorithm, idx) == ("glued", "demon", "0")
    assert members.split(",") == sorted(members.split(","))
    assert export_communities(demon(star_net(), min_size=4)) == ""
