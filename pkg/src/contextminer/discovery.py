"""Candidate-context mining and the human approval queue.

New contexts are not invented from thin air: they are hashtags found
in the timelines of the users the rankings surfaced, enriched with
enough metadata (support, co-tags, a padded time window, an inherited
bounding box) for a reviewer to judge them.  The queue is append-only
in spirit — every proposal and decision lands in an audit log, and a
rejected hashtag is never proposed again.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path

from .contexts import Context
from .corpus import Archive, dump_record, format_ts, parse_ts
from .ranking import RankedList

DEFAULT_TOP_K = 10
DEFAULT_PAD_DAYS = 1
CANDIDATE_STATUSES = ("pending", "approved", "rejected")
_YEAR_TAG_RE = re.compile(r"^(.+?)(\d{4})$")


class ReviewConflictError(Exception):
    """A decision targeted a candidate that is not pending."""


@dataclass
class CandidateContext:
    """A proposed hashtag waiting for (or past) human review."""

    hashtag: str
    support: int
    co_tags: dict[str, int]
    interval: tuple[datetime, datetime]
    bbox: tuple[float, float, float, float] | None
    source_context: str
    status: str = "pending"
    note: str = ""
    recurring: bool = False

    def to_record(self) -> dict:
        return {
            "hashtag": self.hashtag,
            "support": self.support,
            "co_tags": {t: self.co_tags[t] for t in sorted(self.co_tags)},
            "interval": [format_ts(self.interval[0]), format_ts(self.interval[1])],
            "bbox": list(self.bbox) if self.bbox is not None else None,
            "source_context": self.source_context,
            "status": self.status,
            "note": self.note,
            "recurring": self.recurring,
        }


def _candidate_from_record(obj: dict) -> CandidateContext:
    return CandidateContext(
        hashtag=obj["hashtag"],
        support=obj["support"],
        co_tags=dict(obj["co_tags"]),
        interval=(parse_ts(obj["interval"][0]), parse_ts(obj["interval"][1])),
        bbox=tuple(obj["bbox"]) if obj["bbox"] is not None else None,
        source_context=obj["source_context"],
        status=obj["status"],
        note=obj.get("note", ""),
        recurring=obj.get("recurring", False),
    )


def _mine_tag_stats(posts) -> dict[str, dict]:
    """Per-hashtag users, occurrence times, and co-tag counts."""
    stats: dict[str, dict] = {}
    for post in posts:
        for tag in post.hashtags:
            info = stats.setdefault(tag, {"users": set(), "times": [], "co": {}})
            info["users"].add(post.author_id)
            info["times"].append(post.timestamp)
            for other in post.hashtags:
                if other != tag:
                    info["co"][other] = info["co"].get(other, 0) + 1
    return stats


def _padded(times: list[datetime], pad_days: int) -> tuple[datetime, datetime]:
    pad = timedelta(days=pad_days)
    return (min(times) - pad, max(times) + pad)


def discover(
    ranked: RankedList,
    archive: Archive,
    history: set[str],
    k: int = DEFAULT_TOP_K,
    source_context: Context | None = None,
    pad_days: int = DEFAULT_PAD_DAYS,
) -> list[CandidateContext]:
    """Mine the top-k users' full timelines for unseen hashtags.

    History must hold every hashtag already spent — processed context
    terms and rejected candidates — so nothing is proposed twice.
    Results are ordered by support (distinct top-k users), then tag.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not ranked.entries:
        raise ValueError("ranked list is empty")
    top_users = [e.user_id for e in ranked.entries[:k]]
    posts = [p for uid in top_users for p in archive.posts_by(uid)]
    stats = _mine_tag_stats(posts)
    candidates = []
    for tag, info in stats.items():
        if tag in history:
            continue
        candidates.append(
            CandidateContext(
                hashtag=tag,
                support=len(info["users"]),
                co_tags=dict(info["co"]),
                interval=_padded(info["times"], pad_days),
                bbox=source_context.bbox if source_context else None,
                source_context=source_context.context_id if source_context else "",
            )
        )
    candidates.sort(key=lambda c: (-c.support, c.hashtag))
    return candidates


def monitor_recurring(
    history: set[str],
    archive: Archive,
    pad_days: int = DEFAULT_PAD_DAYS,
) -> list[CandidateContext]:
    """Propose later editions of year-suffixed tags already processed.

    carersweek2018 in history plus carersweek2019 in the archive yields
    one recurring candidate; the same or an earlier year never does.
    """
    stems: dict[str, int] = {}
    for tag in history:
        m = _YEAR_TAG_RE.match(tag)
        if m:
            stem, year = m.group(1), int(m.group(2))
            stems[stem] = max(stems.get(stem, 0), year)
    if not stems:
        return []
    candidates = []
    for tag, posts in sorted(archive.hashtag_index().items()):
        if tag in history:
            continue
        m = _YEAR_TAG_RE.match(tag)
        if not m:
            continue
        stem, year = m.group(1), int(m.group(2))
        if stem not in stems or year <= stems[stem]:
            continue
        candidates.append(
            CandidateContext(
                hashtag=tag,
                support=len({p.author_id for p in posts}),
                co_tags=_mine_tag_stats(posts)[tag]["co"],
                interval=_padded([p.timestamp for p in posts], pad_days),
                bbox=None,
                source_context=f"recurring:{stem}{stems[stem]}",
                recurring=True,
            )
        )
    candidates.sort(key=lambda c: (-c.support, c.hashtag))
    return candidates


@dataclass
class CandidateQueue:
    """Review queue with a full audit trail, persisted as one JSON line.

    The hashtag doubles as the candidate id: history collision checks
    already guarantee it is unique across pending, approved, and
    rejected entries alike.
    """

    candidates: dict[str, CandidateContext] = field(default_factory=dict)
    audit: list[dict] = field(default_factory=list)

    def _log(self, action: str, hashtag: str, note: str = "") -> None:
        self.audit.append(
            {"seq": len(self.audit), "action": action, "hashtag": hashtag, "note": note}
        )

    def add(self, found: list[CandidateContext], history: set[str]) -> int:
        """Queue new candidates; known hashtags are silently skipped."""
        added = 0
        for cand in found:
            if cand.hashtag in history or cand.hashtag in self.candidates:
                continue
            self.candidates[cand.hashtag] = cand
            self._log("propose", cand.hashtag)
            added += 1
        return added

    def pending(self) -> list[CandidateContext]:
        return sorted(
            (c for c in self.candidates.values() if c.status == "pending"),
            key=lambda c: (-c.support, c.hashtag),
        )

    def history(self) -> set[str]:
        """Hashtags no longer proposable: everything this queue has seen."""
        return set(self.candidates)

    def review(
        self,
        candidate_id: str,
        decision: str,
        note: str = "",
        interval: tuple[datetime, datetime] | None = None,
        bbox: tuple[float, float, float, float] | None = None,
    ) -> Context | None:
        """Apply a reviewer decision; approval mints the new context.

        Reviewer-edited interval/bbox values are stored verbatim on
        both the candidate and the minted context.
        """
        cand = self.candidates.get(candidate_id)
        if cand is None:
            raise KeyError(f"no candidate {candidate_id!r}")
        if cand.status != "pending":
            raise ReviewConflictError(
                f"candidate {candidate_id!r} already {cand.status}"
            )
        if decision not in ("approve", "reject"):
            raise ValueError(f"decision must be approve or reject, got {decision!r}")
        if interval is not None:
            cand.interval = interval
        if bbox is not None:
            cand.bbox = bbox
        cand.note = note
        if decision == "reject":
            cand.status = "rejected"
            self._log("reject", candidate_id, note)
            return None
        cand.status = "approved"
        self._log("approve", candidate_id, note)
        start = cand.interval[0]
        return Context(
            context_id=f"{cand.hashtag}_{start:%Y%m%d}",
            terms=frozenset({cand.hashtag}),
            interval=cand.interval,
            bbox=cand.bbox,
            status="approved",
            origin="discovered",
        )

    def save(self, path: str | Path) -> None:
        doc = {
            "format": "candidate-queue",
            "version": 1,
            "audit": self.audit,
            "candidates": [
                self.candidates[tag].to_record() for tag in sorted(self.candidates)
            ],
        }
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(dump_record(doc) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | Path) -> "CandidateQueue":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format") != "candidate-queue" or doc.get("version") != 1:
            raise ValueError(f"not a candidate-queue file: {path}")
        queue = cls(audit=list(doc["audit"]))
        for record in doc["candidates"]:
            cand = _candidate_from_record(record)
            queue.candidates[cand.hashtag] = cand
        return queue
