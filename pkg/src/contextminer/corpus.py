"""Archive ingestion and indexing for offline post corpora.

Archives are line-delimited JSON: one post record per line, plus an
optional companion file of user records. Loading builds in-memory
indexes (by author, hashtag, and time) so context queries and timeline
lookups never rescan the file.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

logger = logging.getLogger(__name__)

_LINK_RE = re.compile(r"https?://\S+")

POST_FIELDS = (
    "id", "user_id", "handle", "ts", "text", "hashtags",
    "mentions", "retweet_of", "orig_user", "geo", "links",
)
USER_FIELDS = (
    "user_id", "handle", "followers", "followees", "name", "bio", "statuses",
)


class ArchiveError(Exception):
    """Fatal ingestion problem (unreadable file, bad container format)."""


@dataclass(frozen=True)
class Post:
    """One authored tweet or retweet."""

    post_id: str
    author_id: str
    author_handle: str
    timestamp: datetime
    text: str
    hashtags: frozenset[str]
    mentions: frozenset[str]
    retweet_of: str | None = None
    original_author: str | None = None
    geo: tuple[float, float] | None = None
    link_count: int = 0

    @property
    def is_retweet(self) -> bool:
        return self.retweet_of is not None


@dataclass(frozen=True)
class UserSnapshot:
    """Bulk profile information for one user."""

    user_id: str
    handle: str
    follower_count: int = 0
    followee_count: int = 0
    display_name: str = ""
    bio: str = ""
    total_statuses: int = 0


@dataclass
class LoadReport:
    """Diagnostics accumulated while reading an archive file."""

    path: str
    total_lines: int = 0
    loaded: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def error_count(self) -> int:
        return len(self.errors)


class Archive:
    """Immutable post corpus with author/hashtag/time indexes.

    Construction resolves every referenced user id: ids missing from the
    user file get a placeholder snapshot (zero followers/followees) and
    are recorded in ``unresolved_users`` rather than dropped.
    """

    def __init__(
        self,
        posts: list[Post],
        users: dict[str, UserSnapshot],
        source_label: str = "",
        report: LoadReport | None = None,
    ):
        self.posts = sorted(posts, key=lambda p: (p.timestamp, p.post_id))
        self.users = dict(users)
        self.source_label = source_label
        self.report = report
        self.unresolved_users: set[str] = set()

        self._by_author: dict[str, list[Post]] = {}
        self._by_hashtag: dict[str, list[Post]] = {}
        for post in self.posts:
            self._by_author.setdefault(post.author_id, []).append(post)
            for tag in post.hashtags:
                self._by_hashtag.setdefault(tag, []).append(post)
            self._resolve(post.author_id, post.author_handle)
            for ref in post.mentions:
                self._resolve(ref)
            if post.original_author is not None:
                self._resolve(post.original_author)

    def _resolve(self, user_id: str, handle: str | None = None) -> None:
        if user_id not in self.users:
            self.users[user_id] = UserSnapshot(user_id=user_id, handle=handle or user_id)
            self.unresolved_users.add(user_id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Archive):
            return NotImplemented
        return self.posts == other.posts and self.users == other.users

    def __len__(self) -> int:
        return len(self.posts)

    def posts_by(self, user_id: str) -> list[Post]:
        return list(self._by_author.get(user_id, []))

    def posts_tagged(self, tag: str) -> list[Post]:
        return list(self._by_hashtag.get(tag.lower(), []))

    def hashtag_index(self) -> dict[str, list[Post]]:
        return {tag: list(posts) for tag, posts in self._by_hashtag.items()}

    def authored_counts(self) -> dict[str, int]:
        return {uid: len(posts) for uid, posts in self._by_author.items()}


def parse_ts(raw: str) -> datetime:
    """Parse an ISO-8601 UTC instant; naive strings are taken as UTC."""
    ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_ts(ts: datetime) -> str:
    """Canonical second-precision UTC rendering, e.g. 2018-01-05T10:00:00Z."""
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def count_links(text: str) -> int:
    return len(_LINK_RE.findall(text))


def _parse_post(obj: dict) -> Post:
    for key in ("id", "user_id", "ts"):
        if not isinstance(obj.get(key), str) or not obj[key]:
            raise ValueError(f"missing or invalid field {key!r}")
    text = obj.get("text", "")
    if not isinstance(text, str):
        raise ValueError("text must be a string")
    retweet_of = obj.get("retweet_of")
    orig_user = obj.get("orig_user")
    if (retweet_of is None) != (orig_user is None):
        raise ValueError("retweet_of and orig_user must be present together")
    hashtags = obj.get("hashtags", [])
    mentions = obj.get("mentions", [])
    if not isinstance(hashtags, list) or not isinstance(mentions, list):
        raise ValueError("hashtags and mentions must be lists")
    geo = obj.get("geo")
    if geo is not None:
        if not (isinstance(geo, list) and len(geo) == 2):
            raise ValueError("geo must be [lat, lon]")
        geo = (float(geo[0]), float(geo[1]))
    links = obj.get("links")
    if links is None:
        links = count_links(text)
    if not isinstance(links, int) or links < 0:
        raise ValueError("links must be a non-negative integer")
    return Post(
        post_id=obj["id"],
        author_id=obj["user_id"],
        author_handle=obj.get("handle", obj["user_id"]),
        timestamp=parse_ts(obj["ts"]),
        text=text,
        hashtags=frozenset(t.lower() for t in hashtags if isinstance(t, str) and t),
        mentions=frozenset(m for m in mentions if isinstance(m, str) and m),
        retweet_of=retweet_of,
        original_author=orig_user,
        geo=geo,
        link_count=links,
    )


def _parse_user(obj: dict) -> UserSnapshot:
    if not isinstance(obj.get("user_id"), str) or not obj["user_id"]:
        raise ValueError("missing or invalid field 'user_id'")
    followers = obj.get("followers", 0)
    followees = obj.get("followees", 0)
    if not isinstance(followers, int) or followers < 0:
        raise ValueError("followers must be a non-negative integer")
    if not isinstance(followees, int) or followees < 0:
        raise ValueError("followees must be a non-negative integer")
    return UserSnapshot(
        user_id=obj["user_id"],
        handle=obj.get("handle", obj["user_id"]),
        follower_count=followers,
        followee_count=followees,
        display_name=obj.get("name", ""),
        bio=obj.get("bio", ""),
        total_statuses=obj.get("statuses", 0),
    )


def _read_lines(path: Path, parse, report: LoadReport):
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ArchiveError(f"cannot read {path}: {exc}") from exc
    records = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        report.total_lines += 1
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record is not an object")
            records.append((lineno, parse(obj)))
            report.loaded += 1
        except (ValueError, TypeError) as exc:
            report.errors.append((lineno, str(exc)))
            logger.warning("%s:%d skipped: %s", path, lineno, exc)
    return records


def load_archive(
    posts_path: str | Path,
    users_path: str | Path | None = None,
    source_label: str | None = None,
) -> Archive:
    """Load a line-delimited post file (and optional user file) into an Archive.

    Malformed lines are skipped and reported with their line number;
    duplicate post ids keep the first record seen. An unreadable file
    raises :class:`ArchiveError`.
    """
    posts_path = Path(posts_path)
    report = LoadReport(path=str(posts_path))
    parsed = _read_lines(posts_path, _parse_post, report)

    posts: list[Post] = []
    seen: set[str] = set()
    for lineno, post in parsed:
        if post.post_id in seen:
            report.errors.append((lineno, f"duplicate post id {post.post_id!r} rejected"))
            report.loaded -= 1
            logger.warning("%s:%d duplicate post id %s rejected", posts_path, lineno, post.post_id)
            continue
        seen.add(post.post_id)
        posts.append(post)

    users: dict[str, UserSnapshot] = {}
    if users_path is not None:
        for _, snap in _read_lines(Path(users_path), _parse_user, report):
            users[snap.user_id] = snap

    return Archive(
        posts,
        users,
        source_label=source_label or posts_path.name,
        report=report,
    )


def fetch_timeline(
    archive: Archive,
    user_id: str,
    interval: tuple[datetime, datetime] | None = None,
) -> list[Post]:
    """All posts authored by ``user_id`` within ``interval``, oldest first.

    Unknown users yield an empty list with a warning; archives are
    partial by nature so this is not fatal. An inverted interval is a
    caller error.
    """
    if interval is not None:
        t1, t2 = interval
        if t2 < t1:
            raise ValueError(f"invalid interval: {t1} > {t2}")
    if user_id not in archive._by_author:
        logger.warning("no posts for user %s in archive %s", user_id, archive.source_label)
        return []
    posts = archive.posts_by(user_id)
    if interval is None:
        return posts
    return [p for p in posts if t1 <= p.timestamp <= t2]


def post_to_record(post: Post) -> dict:
    return {
        "id": post.post_id,
        "user_id": post.author_id,
        "handle": post.author_handle,
        "ts": format_ts(post.timestamp),
        "text": post.text,
        "hashtags": sorted(post.hashtags),
        "mentions": sorted(post.mentions),
        "retweet_of": post.retweet_of,
        "orig_user": post.original_author,
        "geo": list(post.geo) if post.geo is not None else None,
        "links": post.link_count,
    }


def user_to_record(snap: UserSnapshot) -> dict:
    return {
        "user_id": snap.user_id,
        "handle": snap.handle,
        "followers": snap.follower_count,
        "followees": snap.followee_count,
        "name": snap.display_name,
        "bio": snap.bio,
        "statuses": snap.total_statuses,
    }


def dump_record(record: dict) -> str:
    """Canonical single-line rendering used by all fixture/export files."""
    return json.dumps(record, ensure_ascii=False, separators=(", ", ": "))


def export_posts(archive: Archive, path: str | Path) -> None:
    """Write every post back out in canonical form (bit-exact round trip)."""
    lines = [dump_record(post_to_record(p)) for p in archive.posts]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def export_users(archive: Archive, path: str | Path) -> None:
    lines = [
        dump_record(user_to_record(archive.users[uid]))
        for uid in sorted(archive.users)
        if uid not in archive.unresolved_users
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
