"""Context queries: topical/temporal/spatial post selection.

A context is a query triple (terms, time interval, optional bounding
box). Evaluating it against an archive splits the in-window posts into
an on-context set (at least one term matches) and its off-context
complement (no term matches).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime

from .corpus import Archive, Post, format_ts, parse_ts

VALID_STATUSES = ("candidate", "approved", "processed", "rejected")

_TOKEN_RE = re.compile(r"[0-9a-z_]+")


@dataclass(frozen=True)
class Context:
    """Query triple plus lifecycle bookkeeping."""

    context_id: str
    terms: frozenset[str]
    interval: tuple[datetime, datetime]
    bbox: tuple[float, float, float, float] | None = None  # min_lat, min_lon, max_lat, max_lon
    status: str = "candidate"
    origin: str = "seed"

    def __post_init__(self):
        if not self.terms:
            raise ValueError(f"context {self.context_id}: terms must be non-empty")
        t1, t2 = self.interval
        if t2 < t1:
            raise ValueError(f"context {self.context_id}: interval end precedes start")
        if self.bbox is not None:
            min_lat, min_lon, max_lat, max_lon = self.bbox
            if max_lat < min_lat or max_lon < min_lon:
                raise ValueError(f"context {self.context_id}: bbox is not well-ordered")
        if self.status not in VALID_STATUSES:
            raise ValueError(f"context {self.context_id}: unknown status {self.status!r}")

    def with_status(self, status: str) -> "Context":
        return replace(self, status=status)


@dataclass
class PostSet:
    """Posts selected for one context, either side of the term split."""

    context_id: str
    kind: str  # "on_context" | "off_context"
    posts: list[Post] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.posts)

    def by_author(self) -> dict[str, list[Post]]:
        grouped: dict[str, list[Post]] = {}
        for post in self.posts:
            grouped.setdefault(post.author_id, []).append(post)
        return grouped

    def post_ids(self) -> set[str]:
        return {p.post_id for p in self.posts}


def _text_tokens(text: str) -> set[str]:
    return set(_TOKEN_RE.findall(text.lower()))


def term_matches(post: Post, terms: frozenset[str]) -> bool:
    """True when any term equals a hashtag or appears as a whole word in text."""
    if post.hashtags & terms:
        return True
    return bool(_text_tokens(post.text) & terms)


def _in_window(post: Post, context: Context, strict_geo: bool) -> bool:
    t1, t2 = context.interval
    if not (t1 <= post.timestamp <= t2):
        return False
    if context.bbox is None:
        return True
    if post.geo is None:
        # geo-tagging is sparse; only a strict query drops untagged posts
        return not strict_geo
    min_lat, min_lon, max_lat, max_lon = context.bbox
    lat, lon = post.geo
    return min_lat <= lat <= max_lat and min_lon <= lon <= max_lon


def evaluate(
    context: Context,
    archive: Archive,
    cap: int | None = None,
    strict_geo: bool = False,
) -> PostSet:
    """On-context posts: in-window, in-bbox, and matching at least one term.

    ``cap`` keeps only the most recent ``cap`` matches, standing in for
    the retrieval limit a live search endpoint would impose.
    """
    if cap is not None and cap <= 0:
        raise ValueError("cap must be positive")
    terms = frozenset(t.lower() for t in context.terms)
    matched = [
        p for p in archive.posts
        if _in_window(p, context, strict_geo) and term_matches(p, terms)
    ]
    if cap is not None and len(matched) > cap:
        matched = matched[-cap:]  # archive.posts is time-ascending
    return PostSet(context_id=context.context_id, kind="on_context", posts=matched)


def evaluate_complement(
    context: Context,
    archive: Archive,
    strict_geo: bool = False,
) -> PostSet:
    """Off-context posts: in-window and in-bbox but matching no term."""
    terms = frozenset(t.lower() for t in context.terms)
    unmatched = [
        p for p in archive.posts
        if _in_window(p, context, strict_geo) and not term_matches(p, terms)
    ]
    return PostSet(context_id=context.context_id, kind="off_context", posts=unmatched)


def context_to_record(context: Context) -> dict:
    t1, t2 = context.interval
    return {
        "context_id": context.context_id,
        "terms": sorted(context.terms),
        "t1": format_ts(t1),
        "t2": format_ts(t2),
        "bbox": list(context.bbox) if context.bbox is not None else None,
        "status": context.status,
        "origin": context.origin,
    }


def context_from_record(obj: dict) -> Context:
    bbox = obj.get("bbox")
    return Context(
        context_id=obj["context_id"],
        terms=frozenset(t.lower() for t in obj["terms"]),
        interval=(parse_ts(obj["t1"]), parse_ts(obj["t2"])),
        bbox=tuple(bbox) if bbox is not None else None,
        status=obj.get("status", "candidate"),
        origin=obj.get("origin", "seed"),
    )
