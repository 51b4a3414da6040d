"""Ranking functions over the profile store.

Each score aggregates a user's metric rows across every context they
were recorded in — the per-user sums live in ScoreTerms so a ranked
list can show its own working.  Rankings never mutate the store; the
inactive-user demotion is a separate pass so callers can inspect both
the raw and the adjusted list.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

from . import expr as _expr
from .store import ProfileEntry, ProfileStore

INACTIVE_THRESHOLD = 0.005
SENTINEL_SCORE = 0.0
EXPRESSION_TERMS = frozenset(
    {"sum_TF", "sum_TS", "sum_TA", "sum_IC", "FR", "participations"}
)


@dataclass(frozen=True)
class ScoreTerms:
    """Per-user aggregates every ranking is built from."""

    sum_tf: float
    sum_ts: float
    sum_ta: float
    sum_ic: float
    fr: float
    participations: int
    tweet_count: int

    def env(self) -> dict[str, float]:
        return {
            "sum_TF": self.sum_tf,
            "sum_TS": self.sum_ts,
            "sum_TA": self.sum_ta,
            "sum_IC": self.sum_ic,
            "FR": self.fr,
            "participations": float(self.participations),
        }


@dataclass(frozen=True)
class RankEntry:
    user_id: str
    handle: str
    score: float
    terms: ScoreTerms
    inactive: bool = False


@dataclass(frozen=True)
class RankedList:
    function: str
    fingerprint: str
    entries: tuple[RankEntry, ...]

    def top(self, k: int) -> tuple[RankEntry, ...]:
        return self.entries[:k]


def score_terms(entry: ProfileEntry, policy: str = "append") -> ScoreTerms:
    rows = entry.metric_rows(policy)
    tweets = sum(
        rec.features.p1_on + rec.features.p1_off
        + rec.features.r1_on + rec.features.r1_off
        for rec in entry.per_context.values()
    )
    return ScoreTerms(
        sum_tf=sum(r.tf for r in rows),
        sum_ts=sum(r.ts for r in rows),
        sum_ta=sum(r.ta for r in rows),
        sum_ic=sum(r.ic for r in rows),
        fr=entry.follower_rank,
        participations=entry.participations,
        tweet_count=tweets,
    )


def _fingerprint(store: ProfileStore) -> str:
    contexts = ",".join(sorted(store.context_counts()))
    return hashlib.sha256(contexts.encode("utf-8")).hexdigest()[:16]


def _ranked(store: ProfileStore, name: str, score_fn, policy: str) -> RankedList:
    entries = []
    for uid in sorted(store.users):
        entry = store.users[uid]
        terms = score_terms(entry, policy)
        entries.append(
            RankEntry(
                user_id=uid,
                handle=entry.handle,
                score=score_fn(uid, terms),
                terms=terms,
            )
        )
    entries.sort(key=lambda e: (-e.score, e.user_id))
    return RankedList(
        function=name, fingerprint=_fingerprint(store), entries=tuple(entries)
    )


def rank1(store: ProfileStore, policy: str = "append") -> RankedList:
    """Fringe finder: high topical focus, low centrality."""
    return _ranked(
        store,
        "rank1",
        lambda _, t: (1.0 / (t.sum_ic + 1.0)) * t.sum_tf,
        policy,
    )


def rank2(store: ProfileStore, policy: str = "append") -> RankedList:
    """Anti-popularity: attachment and centrality, discounted by fame."""
    return _ranked(
        store,
        "rank2",
        lambda _, t: abs(t.fr - 1.0) * (t.sum_ta + t.sum_ic),
        policy,
    )


def rank3(store: ProfileStore, policy: str = "append") -> RankedList:
    """Hybrid: anti-popularity with the fringe bonus instead of raw centrality."""
    return _ranked(
        store,
        "rank3",
        lambda _, t: abs(t.fr - 1.0) * (t.sum_ta + 1.0 / (t.sum_ic + 1.0)),
        policy,
    )


def custom_rank(
    store: ProfileStore, expression: str, policy: str = "append"
) -> RankedList:
    """Rank by a user-supplied expression over the exposed score terms."""
    ast = _expr.parse(expression, EXPRESSION_TERMS)

    def score(uid: str, terms: ScoreTerms) -> float:
        try:
            return _expr.evaluate(ast, terms.env())
        except ZeroDivisionError:
            raise ValueError(
                f"division by zero while scoring user {uid!r}"
            ) from None

    return _ranked(store, f"expr:{expression}", score, policy)


def apply_inactive_rule(
    ranked: RankedList,
    store: ProfileStore,
    threshold: float = INACTIVE_THRESHOLD,
) -> RankedList:
    """Demote users with zero follower rank and negligible tweet volume.

    Volume is min-max normalized over every user in the store (0 when
    all counts are equal), so the cutoff adapts to corpus size.
    Demoted entries keep their relative order rule (score then id) but
    sink below all active users with a sentinel score of 0.
    """
    counts = {
        uid: score_terms(entry).tweet_count for uid, entry in store.users.items()
    }
    lo = min(counts.values(), default=0)
    hi = max(counts.values(), default=0)
    span = hi - lo

    def normalized(uid: str) -> float:
        if span == 0:
            return 0.0
        return (counts.get(uid, lo) - lo) / span

    active, demoted = [], []
    for entry in ranked.entries:
        if entry.terms.fr == 0.0 and normalized(entry.user_id) < threshold:
            demoted.append(replace(entry, score=SENTINEL_SCORE, inactive=True))
        else:
            active.append(entry)
    demoted.sort(key=lambda e: e.user_id)
    return replace(ranked, entries=tuple(active + demoted))


def ranked_csv(ranked: RankedList, store: ProfileStore, top: int | None = None) -> str:
    """CSV report; labels come from the store so reviewers' tags survive."""
    lines = ["rank,user_id,handle,score,FR,participations,labels"]
    entries = ranked.entries if top is None else ranked.entries[:top]
    for position, e in enumerate(entries, start=1):
        entry = store.get(e.user_id)
        labels = ";".join(sorted(entry.labels)) if entry else ""
        lines.append(
            ",".join(
                [
                    str(position),
                    e.user_id,
                    e.handle,
                    f"{e.score:.10g}",
                    f"{e.terms.fr:.10g}",
                    str(e.terms.participations),
                    labels,
                ]
            )
        )
    return "\n".join(lines) + "\n"
