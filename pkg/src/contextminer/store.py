"""File-backed profile database accumulated across pipeline iterations.

The store grows one (user, context) row per iteration and never
forgets: repeat users are exactly the entries holding rows from two or
more contexts.  Persistence is a single canonical text file — a header
line with a checksum, then one JSON record per user, sorted — so equal
stores produce byte-identical files regardless of the order contexts
were processed in.
"""

from __future__ import annotations

import hashlib
import json
import os
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import UserSnapshot, _parse_user, dump_record, user_to_record
from .metrics import (
    CoreFeatures,
    MetricVector,
    features_from_record,
    metrics_from_record,
)

FORMAT_NAME = "profile-store"
FORMAT_VERSION = 1
MERGE_POLICIES = ("append", "latest", "mean")
VALID_LABELS = ("association", "individual", "professional")


class StoreIntegrityError(Exception):
    """Raised when a store file fails structural or checksum validation."""


@dataclass(frozen=True)
class ContextRecord:
    """One processed context's results for one user."""

    features: CoreFeatures
    metrics: MetricVector
    community: int | None = None


@dataclass
class ProfileEntry:
    user_id: str
    handle: str
    snapshot: UserSnapshot | None = None
    per_context: dict[str, ContextRecord] = field(default_factory=dict)
    labels: set[str] = field(default_factory=set)

    @property
    def participations(self) -> int:
        return len(self.per_context)

    # First/last are lexicographic over context ids, not upsert order:
    # the store must serialize identically however a batch was ordered.
    @property
    def first_seen(self) -> str | None:
        return min(self.per_context) if self.per_context else None

    @property
    def last_seen(self) -> str | None:
        return max(self.per_context) if self.per_context else None

    @property
    def follower_rank(self) -> float:
        last = self.last_seen
        return self.per_context[last].metrics.fr if last else 0.0

    def metric_rows(self, policy: str = "append") -> list[MetricVector]:
        """The entry's metric history as seen through a merge policy.

        append keeps every context's row; latest keeps only the newest;
        mean collapses history into one fieldwise-averaged row.
        """
        if policy not in MERGE_POLICIES:
            raise ValueError(f"unknown merge policy {policy!r}")
        rows = [self.per_context[cid].metrics for cid in sorted(self.per_context)]
        if not rows or policy == "append":
            return rows
        if policy == "latest":
            return [rows[-1]]
        return [
            MetricVector(
                tf=statistics.fmean(r.tf for r in rows),
                ts=statistics.fmean(r.ts for r in rows),
                ta=statistics.fmean(r.ta for r in rows),
                fr=statistics.fmean(r.fr for r in rows),
                ic=statistics.fmean(r.ic for r in rows),
                community_scope=any(r.community_scope for r in rows),
            )
        ]

    def to_record(self) -> dict:
        return {
            "user_id": self.user_id,
            "handle": self.handle,
            "snapshot": user_to_record(self.snapshot) if self.snapshot else None,
            "labels": sorted(self.labels),
            "contexts": [
                {
                    "context_id": cid,
                    "community": self.per_context[cid].community,
                    "features": self.per_context[cid].features.to_record(),
                    "metrics": self.per_context[cid].metrics.to_record(),
                }
                for cid in sorted(self.per_context)
            ],
        }


def _entry_from_record(record: dict) -> ProfileEntry:
    entry = ProfileEntry(
        user_id=record["user_id"],
        handle=record["handle"],
        snapshot=_parse_user(record["snapshot"]) if record["snapshot"] else None,
        labels=set(record["labels"]),
    )
    for row in record["contexts"]:
        entry.per_context[row["context_id"]] = ContextRecord(
            features=features_from_record(row["features"]),
            metrics=metrics_from_record(row["metrics"]),
            community=row["community"],
        )
    return entry


class ProfileStore:
    """In-memory profile index with canonical file snapshots."""

    def __init__(self) -> None:
        self.users: dict[str, ProfileEntry] = {}

    def __len__(self) -> int:
        return len(self.users)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProfileStore):
            return NotImplemented
        if self.users.keys() != other.users.keys():
            return False
        return all(
            self.users[uid].to_record() == other.users[uid].to_record()
            for uid in self.users
        )

    def get(self, user_id: str) -> ProfileEntry | None:
        return self.users.get(user_id)

    def upsert(
        self,
        user_id: str,
        context_id: str,
        features: CoreFeatures,
        metrics: MetricVector,
        community: int | None = None,
        snapshot: UserSnapshot | None = None,
        handle: str | None = None,
    ) -> ProfileEntry:
        """Record one context's results for a user.

        Re-running a context replaces that context's row in place, so
        participations counts distinct contexts, not upsert calls.
        """
        entry = self.users.get(user_id)
        if entry is None:
            entry = ProfileEntry(user_id=user_id, handle=handle or user_id)
            self.users[user_id] = entry
        if handle:
            entry.handle = handle
        if snapshot is not None:
            entry.snapshot = snapshot
            entry.handle = snapshot.handle
        entry.per_context[context_id] = ContextRecord(
            features=features, metrics=metrics, community=community
        )
        return entry

    def attach_labels(self, user_id: str, labels: set[str]) -> ProfileEntry:
        bad = set(labels) - set(VALID_LABELS)
        if bad:
            raise ValueError(f"unknown labels: {sorted(bad)}")
        entry = self.users.get(user_id)
        if entry is None:
            raise KeyError(user_id)
        entry.labels |= set(labels)
        return entry

    def context_counts(self) -> dict[str, int]:
        """Users recorded per context; the sum equals total participations."""
        counts: dict[str, int] = {}
        for entry in self.users.values():
            for cid in entry.per_context:
                counts[cid] = counts.get(cid, 0) + 1
        return counts

    def repeat_users(self, min_participations: int = 2) -> list[ProfileEntry]:
        """Entries in >= min_participations contexts, most active first."""
        chosen = [
            e for e in self.users.values() if e.participations >= min_participations
        ]
        chosen.sort(key=lambda e: (-e.participations, -e.follower_rank, e.user_id))
        return chosen

    def snapshot(self, path: str | Path) -> None:
        """Write the canonical store file atomically."""
        body = "".join(
            dump_record(self.users[uid].to_record()) + "\n"
            for uid in sorted(self.users)
        )
        header = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "users": len(self.users),
            "checksum": hashlib.sha256(body.encode("utf-8")).hexdigest(),
        }
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(dump_record(header) + "\n" + body, encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def restore(cls, path: str | Path) -> "ProfileStore":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise StoreIntegrityError(f"cannot read store file: {exc}") from exc
        head, sep, body = text.partition("\n")
        if not sep:
            raise StoreIntegrityError("store file has no header line")
        try:
            header = json.loads(head)
        except json.JSONDecodeError as exc:
            raise StoreIntegrityError(f"unreadable header: {exc}") from exc
        if header.get("format") != FORMAT_NAME:
            raise StoreIntegrityError(f"not a {FORMAT_NAME} file")
        if header.get("version") != FORMAT_VERSION:
            raise StoreIntegrityError(f"unsupported version {header.get('version')!r}")
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        if digest != header.get("checksum"):
            raise StoreIntegrityError("checksum mismatch; store file is corrupted")
        store = cls()
        for lineno, line in enumerate(body.splitlines(), start=2):
            try:
                entry = _entry_from_record(json.loads(line))
            except (KeyError, TypeError, ValueError) as exc:
                raise StoreIntegrityError(f"bad record at line {lineno}: {exc}") from exc
            store.users[entry.user_id] = entry
        if len(store.users) != header.get("users"):
            raise StoreIntegrityError(
                f"header claims {header.get('users')} users, file has {len(store.users)}"
            )
        return store


def repeat_users_csv(store: ProfileStore, min_participations: int = 2) -> str:
    """Repeat-user report: one row per entry in the store's sort order."""
    lines = ["user_id,handle,participations,follower_rank,labels"]
    for entry in store.repeat_users(min_participations):
        lines.append(
            ",".join(
                [
                    entry.user_id,
                    entry.handle,
                    str(entry.participations),
                    f"{entry.follower_rank:.6g}",
                    ";".join(sorted(entry.labels)),
                ]
            )
        )
    return "\n".join(lines) + "\n"
