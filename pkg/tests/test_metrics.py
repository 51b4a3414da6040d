"""Per-user feature counts and the five profile metrics.

Expected values come from the hand tallies in fixtures/README.md; the
oracle sweep at the bottom re-derives every number from the raw fixture
records along a fully separate code path.
"""

import math

import pytest

from contextminer import (
    Context,
    CoreFeatures,
    MetricVector,
    build,
    core_features,
    demon,
    evaluate,
    evaluate_complement,
    load_archive,
    metric_vector,
)
from contextminer.metrics import (
    follower_rank,
    in_degree_centrality,
    scoped_centrality,
    topical_attachment,
    topical_focus,
    topical_strength,
)
from contextminer.communities import CommunityAssignment
import oracles
from conftest import FIXTURES, batch_contexts, utc


def fake_features(**kw):
    base = dict(
        user_id="u", context_id="c",
        r1_on=0, r2_on=0, r3_on=0, r4_on=0, p1_on=0, p2_on=0,
        r1_off=0, r2_off=0, r3_off=0, r4_off=0, p1_off=0, p2_off=0,
        f1=0, f2=0,
    )
    base.update(kw)
    return CoreFeatures(**base)


# ---------------------------------------------------------------------------
# formula spot checks


def test_topical_focus_formula():
    assert topical_focus(fake_features(p1_on=2)) == 2.0
    assert topical_focus(fake_features(p1_on=6, p1_off=2)) == 2.0
    assert topical_focus(fake_features()) == 0.0


def test_topical_strength_formula():
    f = fake_features(p2_on=3, r3_on=6, p2_off=1, r3_off=1)
    want = 3 * math.log(10) / (1 * math.log(3) + 1)
    assert topical_strength(f) == pytest.approx(want, rel=1e-15)
    assert topical_strength(fake_features()) == 0.0


def test_topical_attachment_formula():
    f = fake_features(p1_on=2, p2_on=1, p1_off=1, p2_off=1)
    assert topical_attachment(f) == 1.0
    assert topical_attachment(fake_features(p1_on=3, p2_on=4)) == 7.0


def test_follower_rank_formula():
    assert follower_rank(fake_features(f1=99, f2=1)) == 0.99
    assert follower_rank(fake_features(f1=100)) == 1.0
    assert follower_rank(fake_features(f2=10)) == 0.0
    assert follower_rank(fake_features()) == 0.0  # unknown account


def test_feature_validation():
    with pytest.raises(ValueError):
        fake_features(p1_on=-1)
    with pytest.raises(ValueError):
        fake_features(r2_on=2, r1_on=1)  # more sources than retweets
    with pytest.raises(ValueError):
        fake_features(r4_off=1)  # a retweeter with no retweets
    with pytest.raises(ValueError):
        MetricVector(tf=0, ts=0, ta=0, fr=1.5, ic=0, community_scope=False)
    with pytest.raises(ValueError):
        MetricVector(tf=0, ts=0, ta=0, fr=0, ic=-0.1, community_scope=False)


# ---------------------------------------------------------------------------
# smoke corpus counts


@pytest.fixture(scope="module")
def smoke_sides(smoke_archive):
    c = Context(
        context_id="dry", terms=frozenset({"dryjan"}),
        interval=(utc(2018, 1, 1), utc(2018, 1, 31, 23, 59, 59)),
    )
    return evaluate(c, smoke_archive), evaluate_complement(c, smoke_archive)


SMOKE_EXPECTED = {
    # (r1,r2,r3,r4,p1,p2) on / off — see fixtures/README.md
    "u1": ((1, 1, 1, 1, 2, 1), (0, 0, 0, 0, 0, 0)),
    "u2": ((0, 0, 1, 1, 0, 0), (0, 0, 0, 0, 1, 0)),
    "u3": ((1, 1, 0, 0, 0, 0), (0, 0, 0, 0, 0, 0)),
    "u4": ((0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1)),
}


@pytest.mark.parametrize("user", sorted(SMOKE_EXPECTED))
def test_smoke_feature_table(smoke_archive, smoke_sides, user):
    on, off = smoke_sides
    f = core_features(user, on, off, smoke_archive.users.get(user))
    want_on, want_off = SMOKE_EXPECTED[user]
    assert (f.r1_on, f.r2_on, f.r3_on, f.r4_on, f.p1_on, f.p2_on) == want_on
    assert (f.r1_off, f.r2_off, f.r3_off, f.r4_off, f.p1_off, f.p2_off) == want_off


def test_smoke_u1_metrics(smoke_archive, smoke_sides):
    on, off = smoke_sides
    f = core_features("u1", on, off, smoke_archive.users["u1"])
    net = build(on)
    m = metric_vector(f, net)
    assert m.tf == 2.0
    assert m.ts == pytest.approx(math.log(3), rel=1e-15)
    assert m.ta == 3.0
    assert m.fr == pytest.approx(50 / 150, rel=1e-15)
    assert m.ic == 0.5  # whole-network: one in-edge over N-1=2
    assert not m.community_scope


def test_absent_user_is_all_zero(smoke_sides):
    on, off = smoke_sides
    f = core_features("nobody", on, off)
    assert f == fake_features(user_id="nobody", context_id="dry")


def test_context_mismatch_rejected(smoke_sides, audit_sides):
    with pytest.raises(ValueError):
        core_features("u1", smoke_sides[0], audit_sides[1])


# ---------------------------------------------------------------------------
# audit corpus tables


AUDIT_EXPECTED = {
    "w01": ((0, 0, 5, 4, 4, 3), (0, 0, 1, 1, 2, 1), 2 / 3, 1 / 2),
    "w02": ((3, 2, 0, 0, 1, 1), (1, 1, 0, 0, 1, 0), 0.1, 2 / 9),
    "w03": ((3, 3, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0), 0.5, 1.0),
    "w04": ((2, 1, 1, 1, 1, 1), (1, 1, 0, 0, 0, 0), 0.4, 1 / 2),
    "w05": ((0, 0, 4, 3, 2, 1), (0, 0, 1, 1, 1, 1), 1.0, 0.0),
    "w06": ((0, 0, 0, 0, 2, 0), (0, 0, 1, 1, 1, 0), 0.99, 0.0),
    "w07": ((0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0), 0.0, 0.0),
    "w08": ((0, 0, 0, 0, 1, 0), (0, 0, 2, 1, 4, 1), 0.8, 0.0),
    "w09": ((0, 0, 0, 0, 2, 0), (0, 0, 0, 0, 2, 0), 0.75, 0.0),
    "w10": ((1, 1, 0, 0, 1, 0), (0, 0, 0, 0, 1, 0), 0.3, 1 / 9),
    "w11": ((1, 1, 0, 0, 1, 0), (0, 0, 0, 0, 2, 1), 0.55, 1.0),
    "w12": ((0, 0, 0, 0, 0, 0), (3, 2, 0, 0, 0, 0), 0.1, 0.0),
}


@pytest.fixture(scope="module")
def audit_assignment(audit_sides):
    on, _ = audit_sides
    return build(on), demon(build(on), epsilon=0.25, min_size=3)


def test_audit_communities_as_documented(audit_assignment):
    _, assignment = audit_assignment
    assert {frozenset(c) for c in assignment.communities} == {
        frozenset({"w01", "w09", "w11"}),
        frozenset({"w03", "w04", "w05"}),
    }
    assert assignment.residual == frozenset({"w02", "w06", "w08", "w10"})


@pytest.mark.parametrize("user", sorted(AUDIT_EXPECTED))
def test_audit_feature_and_metric_table(
    audit_archive, audit_sides, audit_assignment, user
):
    on, off = audit_sides
    net, assignment = audit_assignment
    want_on, want_off, want_fr, want_ic = AUDIT_EXPECTED[user]
    f = core_features(user, on, off, audit_archive.users[user])
    assert (f.r1_on, f.r2_on, f.r3_on, f.r4_on, f.p1_on, f.p2_on) == want_on
    assert (f.r1_off, f.r2_off, f.r3_off, f.r4_off, f.p1_off, f.p2_off) == want_off
    m = metric_vector(f, net, assignment)
    assert m.fr == pytest.approx(want_fr, rel=1e-12)
    assert m.ic == pytest.approx(want_ic, rel=1e-12)


def test_audit_w01_worked_example(audit_archive, audit_sides, audit_assignment):
    on, off = audit_sides
    net, assignment = audit_assignment
    f = core_features("w01", on, off, audit_archive.users["w01"])
    m = metric_vector(f, net, assignment)
    assert m.tf == pytest.approx(4 / 3, rel=1e-15)
    assert m.ts == pytest.approx(3 * math.log(9) / (math.log(3) + 1), rel=1e-15)
    assert m.ta == pytest.approx(7 / 4, rel=1e-15)
    assert m.community_scope


def test_default_min_size_goes_null(audit_assignment):
    net, _ = audit_assignment
    assert demon(net, epsilon=0.25, min_size=4).null_communities


# ---------------------------------------------------------------------------
# centrality scoping


def scoping_net():
    # d has two in-edges: over N-1=3 inside its 4-member community,
    # over N-1=5 against the whole 6-node graph. r stays residual.
    from contextminer import ContextNetwork

    nodes = {"a", "b", "c", "d", "r", "q"}
    edges = {
        ("a", "d"): 1, ("b", "d"): 1, ("a", "b"): 1,
        ("c", "r"): 1, ("q", "r"): 1,
    }
    return ContextNetwork(context_id="scope", nodes=nodes, edges=edges)


def manual_assignment(net, groups):
    membership = {}
    for idx, g in enumerate(groups):
        for u in g:
            membership.setdefault(u, set()).add(idx)
    return CommunityAssignment(
        context_id=net.context_id,
        algorithm="demon",
        communities=tuple(frozenset(g) for g in groups),
        membership={u: frozenset(ix) for u, ix in membership.items()},
        residual=frozenset(net.nodes - membership.keys()),
        params={},
    )


def test_community_members_use_community_denominator():
    net = scoping_net()
    assignment = manual_assignment(net, [{"a", "b", "c", "d"}])
    ic, scoped, idx = scoped_centrality(net, assignment, "d")
    assert (ic, scoped, idx) == (2 / 3, True, 0)
    # same node against the whole network would dilute to 2/5
    assert scoped_centrality(net, None, "d")[0] == pytest.approx(2 / 5)


def test_residual_users_use_whole_network():
    net = scoping_net()
    assignment = manual_assignment(net, [{"a", "b", "c", "d"}])
    ic, scoped, idx = scoped_centrality(net, assignment, "r")
    assert (scoped, idx) == (False, None)
    assert ic == pytest.approx(2 / 5)


def test_overlap_takes_strongest_community_lowest_index_on_tie():
    net = scoping_net()
    # d sits in both; the 4-clique-side gives 2/3, the pair gives 1/1
    assignment = manual_assignment(net, [{"a", "b", "c", "d"}, {"a", "d"}])
    ic, scoped, idx = scoped_centrality(net, assignment, "d")
    assert ic == pytest.approx(1.0)
    assert idx == 1
    # exact tie between two equal communities resolves to the lower index
    tied = manual_assignment(net, [{"a", "d"}, {"b", "d"}])
    ic, _, idx = scoped_centrality(net, tied, "d")
    assert ic == pytest.approx(1.0)
    assert idx == 0


def test_non_member_of_network(audit_sides):
    on, _ = audit_sides
    net = build(on)
    with pytest.raises(ValueError):
        in_degree_centrality(net, None, "w12")
    f = core_features("w12", *audit_sides)
    assert metric_vector(f, net, None).ic == 0.0


def test_metric_vector_without_network(smoke_archive, smoke_sides):
    on, off = smoke_sides
    f = core_features("u1", on, off, smoke_archive.users["u1"])
    m = metric_vector(f)
    assert m.ic == 0.0 and not m.community_scope


# ---------------------------------------------------------------------------
# oracle sweep: every fixture, every user, independent recomputation


def fixture_cases():
    yield (
        "smoke.jsonl", "smoke_users.jsonl", {"dryjan"},
        "2018-01-01T00:00:00Z", "2018-01-31T23:59:59Z",
    )
    yield (
        "audit.jsonl", "audit_users.jsonl", {"warmcoats"},
        "2018-02-01T00:00:00Z", "2018-02-14T23:59:59Z",
    )
    for ctx in batch_contexts():
        t1, t2 = ctx.interval
        yield (
            "batch_posts.jsonl", "batch_users.jsonl", set(ctx.terms),
            t1.strftime("%Y-%m-%dT%H:%M:%SZ"), t2.strftime("%Y-%m-%dT%H:%M:%SZ"),
        )


@pytest.mark.parametrize(
    "posts_file, users_file, terms, t1, t2",
    list(fixture_cases()),
    ids=lambda v: v if isinstance(v, str) and v.endswith(".jsonl") else None,
)
def test_all_fixture_metrics_match_oracle(posts_file, users_file, terms, t1, t2):
    arch = load_archive(FIXTURES / posts_file, FIXTURES / users_file)
    from contextminer.corpus import parse_ts
    ctx = Context(
        context_id="sweep", terms=frozenset(terms),
        interval=(parse_ts(t1), parse_ts(t2)), status="approved",
    )
    on = evaluate(ctx, arch)
    off = evaluate_complement(ctx, arch)
    net = build(on)
    assignment = demon(net, epsilon=0.25, min_size=3)
    communities = [set(c) for c in assignment.communities]

    records = oracles.read_jsonl(FIXTURES / posts_file)
    on_recs, off_recs = oracles.split_records(records, terms, t1, t2)
    weights = oracles.edge_weights(on_recs)

    for uid in sorted(arch.users):
        snap = arch.users[uid]
        f = core_features(uid, on, off, snap)
        o_on = oracles.count_features(uid, on_recs)
        o_off = oracles.count_features(uid, off_recs)
        assert (f.r1_on, f.r2_on, f.r3_on, f.r4_on, f.p1_on, f.p2_on) == o_on, uid
        assert (
            f.r1_off, f.r2_off, f.r3_off, f.r4_off, f.p1_off, f.p2_off
        ) == o_off, uid
        m = metric_vector(f, net, assignment)
        want = oracles.metric_formulas(o_on, o_off, f.f1, f.f2)
        for key in ("tf", "ts", "ta", "fr"):
            got = getattr(m, key)
            assert got == pytest.approx(want[key], rel=1e-12, abs=1e-300), (uid, key)
        want_ic = oracles.scoped_ic(uid, communities, net.nodes, weights)
        assert m.ic == pytest.approx(want_ic, rel=1e-12, abs=1e-300), uid
