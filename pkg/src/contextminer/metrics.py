"""Per-user activity features and the five profile metrics.

Eight raw counts are tallied twice per user — once over the on-context
post set, once over its complement — and the metrics combine the two
sides so that purely topical activity scores high and broadcast-y
general activity scores low.  Follower/followee counts come from the
user snapshot and do not depend on the context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .communities import CommunityAssignment
from .contexts import PostSet
from .corpus import UserSnapshot
from .network import ContextNetwork


@dataclass(frozen=True)
class CoreFeatures:
    """Raw counts for one user in one context.

    r1: retweets by the user; r2: unique users they retweeted;
    r3: retweets of the user's posts; r4: unique users who retweeted
    them; p1: original posts; p2: links inside original posts.  The
    _on/_off suffix states which post set the count ran over.  f1/f2
    are followers/followees from the profile snapshot.
    """

    user_id: str
    context_id: str
    r1_on: int
    r2_on: int
    r3_on: int
    r4_on: int
    p1_on: int
    p2_on: int
    r1_off: int
    r2_off: int
    r3_off: int
    r4_off: int
    p1_off: int
    p2_off: int
    f1: int
    f2: int

    def __post_init__(self) -> None:
        for name in (
            "r1_on", "r2_on", "r3_on", "r4_on", "p1_on", "p2_on",
            "r1_off", "r2_off", "r3_off", "r4_off", "p1_off", "p2_off",
            "f1", "f2",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.r2_on > self.r1_on or self.r2_off > self.r1_off:
            raise ValueError("unique retweeted users cannot exceed retweet count")
        if self.r4_on > self.r3_on or self.r4_off > self.r3_off:
            raise ValueError("unique retweeters cannot exceed retweet count")

    def to_record(self) -> dict:
        return {
            "user_id": self.user_id,
            "context_id": self.context_id,
            "r1_on": self.r1_on, "r2_on": self.r2_on,
            "r3_on": self.r3_on, "r4_on": self.r4_on,
            "p1_on": self.p1_on, "p2_on": self.p2_on,
            "r1_off": self.r1_off, "r2_off": self.r2_off,
            "r3_off": self.r3_off, "r4_off": self.r4_off,
            "p1_off": self.p1_off, "p2_off": self.p2_off,
            "f1": self.f1, "f2": self.f2,
        }


@dataclass(frozen=True)
class MetricVector:
    """The five profile metrics; community_scope says how IC was scoped."""

    tf: float
    ts: float
    ta: float
    fr: float
    ic: float
    community_scope: bool

    def __post_init__(self) -> None:
        if not 0.0 <= self.fr <= 1.0:
            raise ValueError(f"follower rank out of range: {self.fr}")
        if not 0.0 <= self.ic <= 1.0:
            raise ValueError(f"in-degree centrality out of range: {self.ic}")

    def to_record(self) -> dict:
        return {
            "tf": self.tf, "ts": self.ts, "ta": self.ta,
            "fr": self.fr, "ic": self.ic,
            "community_scope": self.community_scope,
        }


def _count_side(user: str, posts: PostSet) -> tuple[int, int, int, int, int, int]:
    r1 = r3 = p1 = p2 = 0
    retweeted_by_user: set[str] = set()
    retweeters: set[str] = set()
    for post in posts.posts:
        if post.author_id == user:
            if post.is_retweet:
                r1 += 1
                if post.original_author is not None:
                    retweeted_by_user.add(post.original_author)
            else:
                p1 += 1
                p2 += post.link_count
        elif post.is_retweet and post.original_author == user:
            r3 += 1
            retweeters.add(post.author_id)
    return r1, len(retweeted_by_user), r3, len(retweeters), p1, p2


def core_features(
    user: str,
    on: PostSet,
    off: PostSet,
    snapshot: UserSnapshot | None = None,
) -> CoreFeatures:
    """Tally the eight counts for one user over both post sets.

    The off side must be the context complement over all users, not
    just the user's own timeline: retweets *of* the user are authored
    by others and would otherwise be invisible.  A user absent from
    both sets gets all-zero counts.
    """
    if on.context_id != off.context_id:
        raise ValueError(
            f"post sets from different contexts: {on.context_id!r} vs {off.context_id!r}"
        )
    r1_on, r2_on, r3_on, r4_on, p1_on, p2_on = _count_side(user, on)
    r1_off, r2_off, r3_off, r4_off, p1_off, p2_off = _count_side(user, off)
    return CoreFeatures(
        user_id=user,
        context_id=on.context_id,
        r1_on=r1_on, r2_on=r2_on, r3_on=r3_on, r4_on=r4_on,
        p1_on=p1_on, p2_on=p2_on,
        r1_off=r1_off, r2_off=r2_off, r3_off=r3_off, r4_off=r4_off,
        p1_off=p1_off, p2_off=p2_off,
        f1=snapshot.follower_count if snapshot else 0,
        f2=snapshot.followee_count if snapshot else 0,
    )


def topical_focus(f: CoreFeatures) -> float:
    return f.p1_on / (f.p1_off + 1)


def topical_strength(f: CoreFeatures) -> float:
    # Natural log; the base only rescales scores monotonically.
    num = f.p2_on * math.log(f.p2_on + f.r3_on + 1)
    den = f.p2_off * math.log(f.p2_off + f.r3_off + 1) + 1
    return num / den


def topical_attachment(f: CoreFeatures) -> float:
    return (f.p1_on + f.p2_on) / (f.p1_off + f.p2_off + 1)


def follower_rank(f: CoreFeatures) -> float:
    total = f.f1 + f.f2
    if total == 0:
        # Unknown account: treated as non-popular rather than undefined.
        return 0.0
    return f.f1 / total


def scoped_centrality(
    net: ContextNetwork, assignment: CommunityAssignment | None, user: str
) -> tuple[float, bool, int | None]:
    """(IC, community-scoped?, index of the community that produced it).

    Overlapping detectors can place a user in several communities; the
    strongest local role wins (ties go to the lowest index).  Users in
    no retained community are measured against the whole network and
    get index None.
    """
    indices = assignment.membership.get(user) if assignment else None
    if indices:
        best, best_idx = 0.0, min(indices)
        for idx in sorted(indices):
            members = set(assignment.communities[idx])
            n = len(members)
            if n > 1:
                value = net.subgraph(members).in_degree(user) / (n - 1)
                if value > best:
                    best, best_idx = value, idx
        return best, True, best_idx
    n = net.node_count
    if n <= 1:
        return 0.0, False, None
    return net.in_degree(user) / (n - 1), False, None


def in_degree_centrality(
    net: ContextNetwork, assignment: CommunityAssignment | None, user: str
) -> float:
    """Normalized in-degree, scoped to the user's community when they have one."""
    if user not in net.nodes:
        raise ValueError(f"user {user!r} not in network {net.context_id!r}")
    return scoped_centrality(net, assignment, user)[0]


def metric_vector(
    f: CoreFeatures,
    net: ContextNetwork | None = None,
    assignment: CommunityAssignment | None = None,
) -> MetricVector:
    """All five metrics for one user; IC is 0 for users outside the network."""
    if net is not None and f.user_id in net.nodes:
        ic, scoped, _ = scoped_centrality(net, assignment, f.user_id)
    else:
        ic, scoped = 0.0, False
    return MetricVector(
        tf=topical_focus(f),
        ts=topical_strength(f),
        ta=topical_attachment(f),
        fr=follower_rank(f),
        ic=ic,
        community_scope=scoped,
    )


def feature_record(f: CoreFeatures, m: MetricVector) -> dict:
    """Canonical per-(user, context) export row."""
    record = f.to_record()
    record.update(m.to_record())
    return record


def features_from_record(record: dict) -> CoreFeatures:
    return CoreFeatures(
        user_id=record["user_id"],
        context_id=record["context_id"],
        r1_on=record["r1_on"], r2_on=record["r2_on"],
        r3_on=record["r3_on"], r4_on=record["r4_on"],
        p1_on=record["p1_on"], p2_on=record["p2_on"],
        r1_off=record["r1_off"], r2_off=record["r2_off"],
        r3_off=record["r3_off"], r4_off=record["r4_off"],
        p1_off=record["p1_off"], p2_off=record["p2_off"],
        f1=record["f1"], f2=record["f2"],
    )


def metrics_from_record(record: dict) -> MetricVector:
    return MetricVector(
        tf=record["tf"], ts=record["ts"], ta=record["ta"],
        fr=record["fr"], ic=record["ic"],
        community_scope=record["community_scope"],
    )
